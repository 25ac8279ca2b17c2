"""Numerical kernels: special functions, quadrature, Fourier convolution, random streams"""
