"""
Integration tests for the bnstructure command line
"""