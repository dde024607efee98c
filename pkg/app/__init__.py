"""
False Theta Reciprocal Workbench - Main Application Package
"""

__version__ = "0.1.0"
