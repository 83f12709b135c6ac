{
    "dataset_fname": "data/breast_cancer.csv",
    "label_column": "diagnosis",
    "positive_label": "M",
    "drop_columns": ("id",),
    "holdout_val_fraction": 0.6,
    "penalty": "weighted-l1",
    "q": 1.0,
    "delta1": 3e-1,
    "delta2": 4e-1,
    "alpha": 3e-3,
    "output_dirname": "sgsvp_output/breast_weighted_l1",
}
