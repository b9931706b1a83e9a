"""Stack and queue layouts of graph products, with validators and small-instance oracles."""

__version__ = "0.1.0"
