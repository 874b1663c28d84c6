"""Exact computations with Dehn twists on small surfaces.

Submodules:

* :mod:`twistcalc.intmat`: exact integer matrices, fixed lattices, quadratic eigenvalues.
* :mod:`twistcalc.slopes`: curves as slopes on the torus and the four-punctured sphere.
* :mod:`twistcalc.freegrp`: free-group automorphisms and surface presentations.
* :mod:`twistcalc.formulas`: exhaustive sweeps of intersection-number formulas.
* :mod:`twistcalc.characterize`: decision procedures for twist relations.
* :mod:`twistcalc.twistlang`: parser and evaluator for twist words.
* :mod:`twistcalc.cli`: the ``twistcalc`` command.
"""

__version__ = "0.1.0"
