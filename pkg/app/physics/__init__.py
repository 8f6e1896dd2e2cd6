"""
Numerical library for measurement-modified polarization decay.

Modules are pure functions over the domain types in app.domain.models and
can be used without an application context:

- polarization: per-round-trip amplitude propagation.
- noise: rotation-angle chains and their correlation functions.
- closed_forms: analytic decay laws.
- spectra: spectra, overlap integrals and decay rates.
- quadrature: adaptive Gauss-Legendre integration.
- montecarlo: ensemble estimates of the decay curve.
- chain: exact recursion for finite Markov chains of angles.
"""
