"""Wordle game replay, feature extraction, and amusement modeling.

Subpackage map:

* ``lexres`` - loaders for word lists, embeddings, pronunciations,
  frequencies, symbol probabilities, affect and humor norms;
* ``engine`` - feedback marking, candidate filtering, reduction features
  (hot kernels live in a compiled extension with a NumPy fallback);
* ``games`` - share-text / JSONL transcript parsing, label joins, kappa;
* ``funny`` - category vectors, the 19 word features, the ridge model;
* ``gamefeatures`` - per-game feature vectors and the features CSV;
* ``classify`` - subsampling, splitting, logistic regression with Wald
  inference, likelihood-ratio tests, the feedforward baseline;
* ``cli`` - the ``wordle-amuse`` command;
* ``synth`` - synthetic corpus generator for demos and benchmarks.
"""

from .kernels import BACKEND_NAME as kernel_backend

__version__ = "0.1.0"

__all__ = ["kernel_backend", "__version__"]
