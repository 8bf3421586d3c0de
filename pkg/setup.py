#!/usr/bin/env python
# -*- coding: utf-8 -*-
import runpy
from setuptools import setup
import os

here = os.path.abspath(os.path.dirname(__file__))

with open(os.path.join(here, "README.rst")) as readme_file:
    readme = readme_file.read()

with open(os.path.join(here, "HISTORY.rst")) as history_file:
    history = history_file.read()

version_dict = runpy.run_path(os.path.join(here, "resonpy", "version.py"))

author_dict = runpy.run_path(os.path.join(here, "resonpy", "author.py"))

requirements = [
    "mpmath>=1.1",
    "numpy>=1.17",
    "pandas>=1.5",
]

extras_requirements = {"progress": ["tqdm>=4.36"]}

setup_requirements = ["pytest-runner>=2.11"]

test_requirements = ["pytest>=3", "scipy>=1.3"]

setup(
    name="resonpy",
    version=version_dict["__version__"],
    description="Resonance-method experiments for large values of the Riemann zeta function in the critical strip",
    long_description=readme + "\n\n" + history,
    author=author_dict["__author__"],
    author_email=author_dict["__email__"],
    packages=["resonpy", "resonpy.experiments"],
    include_package_data=True,
    install_requires=requirements,
    extras_require=extras_requirements,
    entry_points={"console_scripts": ["resonpy=resonpy.cli:main"]},
    license="MIT license",
    zip_safe=False,
    keywords="resonpy zeta resonance number-theory",
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Natural Language :: English",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    setup_requires=setup_requirements,
    test_suite="tests",
    tests_require=test_requirements,
)
