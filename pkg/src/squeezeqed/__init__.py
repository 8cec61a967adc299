"""Driven multiphoton qubit-resonator simulation toolkit.

Submodules
----------
numerics     truncated-Fock/qubit operator algebra and matrix functions
hamiltonians builders for the lab, rotating, interaction and effective models
dynamics     unitary and Lindblad propagation, expectations, fidelities
protocols    conditional-squeezing protocol, gates, phase estimation, synthesis
analysis     Wigner functions, photon statistics, squeezing extraction
circuit      lumped-element circuit to coupling-constant derivation
scenarios    declarative run descriptions, figure presets, sweeps
cli          command-line entry point (`squeezeqed`)
"""

__version__ = "0.1.0"
