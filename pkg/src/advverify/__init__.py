"""Order-of-accuracy verification for a 1D advection test problem."""
