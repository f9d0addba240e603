"""Maximum-density still lifes: exact bucket elimination, a memetic algorithm
with optimal recombination, and a beam-search hybrid with mini-bucket bounds."""

__version__ = "0.1.0"
