# Empty file to mark directory as Python package __init__.py
