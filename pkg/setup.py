import setuptools

README = "README.md"

with open(README, "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="sgsvp",
    version="0.1.0",
    description=(
        "Sparse generalized singular vectors for feature selection and "
        "classification"
    ),
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    package_dir={"": "."},
    packages=setuptools.find_packages(where=".", exclude=("tests",)),
    python_requires=">=3.8",
    install_requires=["numpy", "matplotlib", "pandas>=1.5", "scikit-learn"],
    extras_require={"test": ["pytest", "scipy"]},
    entry_points={"console_scripts": ["sgsvp = sgsvp.__main__:main"]},
)
