{
    "dataset_fname": "data/ovarian_cancer.csv",
    "label_column": "class",
    "positive_label": "Cancer",
    "drop_columns": (),
    "holdout_val_fraction": 0.7,
    "penalty": "lq",
    "q": 0.1,
    "delta1": 6e-2,
    "delta2": 6e-2,
    "alpha": 0.31622776601683794,
    # for `sgsvp stability`
    "q_list": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0),
    "epsilon_list": (0.0031622776601683794, 0.01, 0.03162277660168379),
    "output_dirname": "sgsvp_output/ovarian_lq",
}
