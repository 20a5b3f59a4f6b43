"""Reconstruction of homogeneous polynomial maps and forms from their Milnor algebras."""
