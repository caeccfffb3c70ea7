"""Toolkit for DC-biased Josephson-junction microwave photon sources.

Subpackages
-----------
network     frequency-domain linear solver for the electromagnetic environment
pe          Minnhagen solver and forward emission observables
extraction  inverse pipeline: P, temperature, critical current, impedance, circuit fit
dynamics    stochastic emission simulation and renewal-process tools
correlator  two-channel measurement chain and correlation estimators
thermal     electron-temperature closed forms for the on-chip resistor
cli         command-line front end
"""

__version__ = "0.1.0"
