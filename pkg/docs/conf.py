# Configuration file for the Sphinx documentation builder.
#
# -- Path setup --------------------------------------------------------------

import os
import sys

import sphinx_rtd_theme


sys.path.insert(0, os.path.abspath(".."))

# -- Project information -----------------------------------------------------

project = "django-nested-cones"
copyright = "2024, django-nested-cones contributors"
author = "django-nested-cones contributors"

# The short X.Y version
version = "0.1"
# The full version, including alpha/beta/rc tags
release = "0.1.0"

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.todo",
    "sphinx.ext.coverage",
    "sphinx.ext.mathjax",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
language = "en"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = None

# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
html_static_path = ["_static"]
htmlhelp_basename = "django-nested-cones_docs"

# -- Options for LaTeX output ------------------------------------------------

latex_documents = [
    (
        master_doc,
        "django-nested-cones.tex",
        "django-nested-cones Documentation",
        author,
        "manual",
    ),
]

# -- Options for manual page output ------------------------------------------

man_pages = [
    (
        master_doc,
        "django-nested-cones",
        "django-nested-cones Documentation",
        [author],
        1,
    )
]

# -- Extension configuration -------------------------------------------------

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
}

todo_include_todos = True
