"""signalmine: mine weak-supervision signals from raw corpora, restructure them
into prompted source/target examples, and mix them into curriculum-staged
training bundles with a matching evaluation harness."""

__version__ = "0.1.0"
