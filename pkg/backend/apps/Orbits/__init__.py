"""
Orbits app: exact index-iteration analysis of closed characteristics on
star-shaped hypersurfaces in R^4.
"""
