"""Free Lie and quasi-Lie rings, tree diagrams, and exact integer linear algebra."""

__version__ = "0.1.0"
