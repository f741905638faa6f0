"""Language-aware accessibility auditing for multilingual web pages."""

__version__ = "0.1.0"
