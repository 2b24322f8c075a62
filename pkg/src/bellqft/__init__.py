"""Bell-CHSH violation for a free massive scalar field in 1+1 dimensions.

Modules: ``qm_bell`` (two-qubit reference), ``modular`` (the two-dimensional
modular test-function space), ``weyl`` (Gaussian vacuum expectations of Weyl
words), ``chsh`` (closed-form and word-based correlators), ``kernels`` and
``fourier`` (position- and momentum-space two-point functions), ``proca``
(the massive vector field), ``optimize`` and ``cli``.
"""

__version__ = "0.1.0"
