"""Level-conditional abdominal slice synthesis on procedural phantoms."""

__version__ = "0.1.0"
