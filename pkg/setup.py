from setuptools import find_packages, setup

setup(
    name="lieblab",
    version="0.1.0",
    packages=find_packages(exclude=("tests",)),
    install_requires=[
        "numpy>=1.26.0",
        "pandas>=2.0.0",
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
    ],
    entry_points={"console_scripts": ["lieblab=lieblab.entrypoints.cli:main"]},
    python_requires=">=3.10",
)
