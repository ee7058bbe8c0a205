# src/__init__.py
"""Main source package"""
pass
