#!/usr/bin/env python3
"""Emit the Joe-Kuo (new-joe-kuo-6.21201) direction numbers as a C++ include.

The table shipped with SciPy is the same published file; we read it from there
so the generated header can be reproduced without network access.

usage: gen_sobol_table.py [max_dim] > include/vorbo/detail/sobol_table.inc
"""
import os
import sys

import numpy as np
import scipy

max_dim = int(sys.argv[1]) if len(sys.argv) > 1 else 1024
path = os.path.join(os.path.dirname(scipy.__file__), "stats", "_sobol_direction_numbers.npz")
data = np.load(path)
poly, vinit = data["poly"], data["vinit"]

print("// Generated by tools/gen_sobol_table.py. Do not edit.")
print("// Joe-Kuo new-joe-kuo-6.21201 direction numbers.")
print("// Row d: {polynomial (with leading and trailing bits), {m_1, ..., m_s}}")
print(f"inline constexpr std::size_t kSobolTableDims = {max_dim};")
print("inline constexpr SobolRow kSobolTable[kSobolTableDims] = {")
for d in range(max_dim):
    p = int(poly[d])
    s = p.bit_length() - 1
    m = ", ".join(str(int(v)) for v in vinit[d, :s])
    print(f"    {{{p}u, {{{m}}}}},")
print("};")
