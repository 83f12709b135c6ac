{
    "dataset_fname": "data/breast_cancer.csv",
    "label_column": "diagnosis",
    "positive_label": "M",
    "drop_columns": ("id",),
    "holdout_val_fraction": 0.6,
    "penalty": "lq",
    "q": 0.1,
    "delta1": 2e-2,
    "delta2": 2e-2,
    "alpha": 2.5e-3,
    "output_dirname": "sgsvp_output/breast_lq",
}
