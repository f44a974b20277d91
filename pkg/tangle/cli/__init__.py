"""Command-line front end"""
from tangle.cli.config import RunConfig, load_config

__all__ = ['RunConfig', 'load_config']
