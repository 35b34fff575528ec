from setuptools import setup, find_packages

setup(
    name="qlo",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    py_modules=["main", "config", "lab_core", "report_writer"],
    install_requires=[
        "click",
        "joblib",
        "mpmath",
        "networkx",
        "numpy",
        "psutil",
        "pydantic",
        "python-dotenv",
        "PyYAML",
        "scipy",
    ],
    entry_points={"console_scripts": ["qlo=main:qlo"]},
)
