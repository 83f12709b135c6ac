{
    # l1 penalty, breast cancer (these are also the RunConfig defaults)
    "dataset_fname": "data/breast_cancer.csv",
    "label_column": "diagnosis",
    "positive_label": "M",
    "drop_columns": ("id",),
    "holdout_val_fraction": 0.6,
    "penalty": "l1",
    "delta1": 0.8685052631578947,
    "delta2": 0.8685052631578947,
    "alpha": 1e-3,
    "output_dirname": "sgsvp_output/breast_l1",
}
