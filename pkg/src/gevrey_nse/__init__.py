# -*- coding: utf-8 -*-
"""The main gevrey_nse package"""
from importlib.metadata import PackageNotFoundError, version

try:
    DIST_NAME = "gevrey-nse"
    __version__ = version(DIST_NAME)
except PackageNotFoundError:
    __version__ = 'unknown'
finally:
    del version, PackageNotFoundError
