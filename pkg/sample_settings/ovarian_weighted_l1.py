{
    "dataset_fname": "data/ovarian_cancer.csv",
    "label_column": "class",
    "positive_label": "Cancer",
    "drop_columns": (),
    "holdout_val_fraction": 0.7,
    "penalty": "weighted-l1",
    "q": 1.0,
    "delta1": 3e-3,
    "delta2": 3e-3,
    "alpha": 0.31622776601683794,
    "output_dirname": "sgsvp_output/ovarian_weighted_l1",
}
