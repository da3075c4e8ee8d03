"""Read-only figure scripts for poldyn CSV outputs.

The scripts never recompute physics: they consume the documented CSV
schema ('#'-prefixed metadata, one header row) and render the three
standard figure types: driven-population overlays, spectral-function
panels across disorder strengths, and the splitting-versus-disorder
summary curve.
"""

__version__ = "0.1.0"
