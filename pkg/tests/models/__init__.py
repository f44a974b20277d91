"""
Test models package initialization.
""" 