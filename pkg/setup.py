from setuptools import setup, find_packages

setup(
    name="mahlerlab",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "examples"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy",
        "scipy",
        "sympy",
        "pandas",
        "pyyaml",
        "loguru",
        "tqdm",
        "termcolor2",
        "matplotlib",
        "SciencePlots",
    ],
    extras_require={"test": ["pytest", "mpmath"]},
    entry_points={"console_scripts": ["mahlerlab=mahlerlab.cli:main"]},
)
