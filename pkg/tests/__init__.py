"""
chainpart test suite.
"""
