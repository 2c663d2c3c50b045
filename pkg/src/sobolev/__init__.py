"""Numerical core: Green's kernel, discrete curves, Sobolev gradient and flow integration."""
