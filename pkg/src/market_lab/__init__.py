"""Market predictability lab: AS and DSMC market simulation, linear-system extraction and prediction."""

__version__ = "0.1.0"
