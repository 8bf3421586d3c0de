#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# resonpy documentation build configuration file.

import sys
import os

# Make the package importable without installing it
cwd = os.getcwd()
project_root = os.path.dirname(cwd)
sys.path.insert(0, project_root)

import resonpy  # noqa: E402

# -- General configuration ---------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "numpydoc",
]

source_suffix = ".rst"
master_doc = "index"

project = "resonpy"
copyright = "2026, {}".format(resonpy.__author__)

version = resonpy.__version__
release = resonpy.__version__

exclude_patterns = ["_build"]
pygments_style = "sphinx"

# members are listed by the automodule directives in api.rst
numpydoc_class_members_toctree = False
numpydoc_show_class_members = False

# -- Options for HTML output -------------------------------------------

html_theme = "alabaster"
html_theme_options = {
    "description": "Resonance-method experiments for large values of zeta",
    "description_font_style": "italic",
    "fixed_sidebar": True,
}
htmlhelp_basename = "resonpydoc"

# -- Options for other builders ----------------------------------------

latex_documents = [
    ("index", "resonpy.tex", "resonpy Documentation", resonpy.__author__, "manual"),
]

man_pages = [
    ("index", "resonpy", "resonpy Documentation", [resonpy.__author__], 1),
]
