"""Three-tank benchmark simulator with flatness-based fault detection and isolation.

Submodules
----------
plant           tank dynamics, RK4 step, equilibria
faults          fault and noise models, sensing
flatness        redundancy maps of the flat outputs Z1 and Z2
differentiator  receding-horizon algebraic derivative estimation
control         reference trajectory, feedforward and PI loops
simulation      closed-loop runs
fdi             residues, thresholds, sensitivities, signatures, alarms
experiment      calibration and fault experiments
config, io, cli scenario files, CSV output, command line
"""
__version__ = "0.1.0"
