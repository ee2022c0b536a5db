#!/usr/bin/env python3
"""
Main entry point for the bnstructure module
"""

if __name__ == "__main__":
    from .cli import main

    main()
