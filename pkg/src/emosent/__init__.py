"""emosent: emoji-centric sentiment analysis for financial microblogs.

Pipeline pieces: corpus ingestion/filtering/splitting, emoji-preserving
tokenization, log-normalized TF-IDF, logistic-regression and multinomial-NB
classifiers with bootstrap confidence intervals, emoji sentiment lexicons,
cross-domain distribution tests, and entropy/latency accounting. The
``emosent`` CLI wires it all into reproducible subcommands.
"""

__version__ = "0.1.0"
