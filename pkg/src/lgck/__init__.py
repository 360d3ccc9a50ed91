"""lgck: exact computer algebra for Landau-Ginzburg orbifold state spaces,
matrix-factorization Chern characters, simplicial de Rham machinery, and
cohomological-field-theory axiom verification."""

__version__ = "0.1.0"
