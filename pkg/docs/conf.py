# -*- coding: utf-8 -*-
#
# Sphinx configuration of the gevrey-nse documentation.
#
# The API reference under docs/api is regenerated by sphinx-apidoc on every build.
import os
import sys

from sphinx.ext import apidoc

_DOCS_DIR = os.path.dirname(os.path.abspath(__file__))
_SOURCE_DIR = os.path.join(_DOCS_DIR, "..", "src")
sys.path.insert(0, _SOURCE_DIR)

# -- API reference --------------------------------------------------------------

apidoc.main(["--force", "--module-first", "-o", os.path.join(_DOCS_DIR, "api"),
             os.path.join(_SOURCE_DIR, "gevrey_nse")])

# -- General configuration ------------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.intersphinx', 'sphinx.ext.viewcode',
              'sphinx.ext.mathjax', 'sphinx.ext.napoleon']
source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build']
pygments_style = 'sphinx'

project = u'gevrey-nse'
copyright = u'2026, gevrey-nse developers'

try:
    from gevrey_nse import __version__ as version
except ImportError:
    version = 'unknown'
release = version

# -- HTML output ----------------------------------------------------------------

html_theme = 'alabaster'
html_theme_options = {
    'sidebar_width': '300px',
    'page_width': '1200px'
}
htmlhelp_basename = 'gevrey-nse-doc'

# -- External mapping -----------------------------------------------------------

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}
