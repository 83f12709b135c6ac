{
    # see docs/formats.md for converting the ovarian cancer data to CSV
    "dataset_fname": "data/ovarian_cancer.csv",
    "label_column": "class",
    "positive_label": "Cancer",
    "drop_columns": (),
    "holdout_val_fraction": 0.7,
    "penalty": "l1",
    "delta1": 0.0475578947368421,
    "delta2": 0.0475578947368421,
    "alpha": 4e-3,
    "output_dirname": "sgsvp_output/ovarian_l1",
}
