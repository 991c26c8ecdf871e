# -*- coding: utf-8 -*-
"""
Installs gevrey-nse.

All metadata lives in setup.cfg.
"""
import sys

from setuptools import setup

if sys.version_info < (3, 10):
    print("Error: gevrey-nse needs python >= 3.10")
    sys.exit(1)


if __name__ == "__main__":
    setup()
