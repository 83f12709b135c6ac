{
    # tests/oracles.py can write a small two-class dataset to try this on
    "dataset_fname": "synthetic.csv",
    "label_column": "label",
    "positive_label": "pos",
    "drop_columns": ("id",),
    "alpha": 0.01,
    "delta1": 0.001,
    "delta2": 0.001,
    "maxiter": 3000,
    "delta1_grid": (0.001, 0.01, 0.1),
    "delta2_grid": (0.001, 0.01, 0.1),
    "alpha_grid": (0.01, 0.001),
    "q_list": (0.1, 0.5, 1.0),
    "output_dirname": "sgsvp_output/synthetic",
}
