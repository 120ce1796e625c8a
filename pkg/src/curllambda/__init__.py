"""curllambda - right inverse of curl + lambda and its applications."""

__version__ = "0.1.0"
