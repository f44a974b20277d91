"""
Test utils package initialization.
""" 