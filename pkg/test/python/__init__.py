"""
Test package for bnstructure
"""