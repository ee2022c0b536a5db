"""
Unit tests for bnstructure components
"""