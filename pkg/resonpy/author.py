# -*- coding: utf-8 -*-

__author__ = "resonpy contributors"
__email__ = "resonpy@users.noreply.github.com"
