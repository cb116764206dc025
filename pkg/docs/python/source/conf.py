import os
import sys

# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Project information -----------------------------------------------------

sys.path.insert(0, os.path.abspath('../../../python'))

from orbistar import __version__  # noqa: E402

project = 'orbistar'
copyright = '2026, orbistar contributors'
author = 'orbistar contributors'
release = __version__

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx.ext.githubpages'
]

templates_path = ['_templates']
exclude_patterns = []

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = []
html_theme_options = {
    'style_external_links': True,
    'style_nav_header_background': '#2980B9'
}

autodoc_member_order = 'bysource'
