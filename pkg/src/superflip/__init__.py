"""Super Teichmueller theory of the once-punctured torus, numerically.

Layers, bottom to top:

- ``grassmann``: exact arithmetic and analytic calculus in a finite real
  Grassmann algebra.
- ``osp12``: graded 3x3 matrices for OSp(1|2), super Minkowski vectors,
  light-cone lifts of the fundamental domain, holonomy generators and the
  supertrace-length dictionary.
- ``torus``: decorated coordinates (three lambda-lengths, two odd
  mu-invariants, a spin class), super Ptolemy flips, Dehn twists, the
  flip-invariant semi-perimeter and the three-term twist recursion.
- ``markoff``: the dual trivalent tree, super Markoff maps, sink search
  and bounded-region enumeration with pruning.
- ``identity``: summands and truncated sums for the super McShane
  identity, tail estimates and spectrum diagnostics.
- ``cli``: the ``superflip`` command.
"""

from .grassmann import GrassmannNumber

__all__ = ["GrassmannNumber"]
__version__ = "0.1.0"
