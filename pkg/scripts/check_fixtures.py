"""Strength and structural checks for the built-in explicit codes."""

from tridesign.designs import FIXTURES, design_strength, fixture, spectrum, verify_conjecture_witness

for name in FIXTURES:
    inst = fixture(name)
    spec = spectrum(inst)
    line = f"{name:14s} n={inst.n} M={inst.M:3d} strength={design_strength(inst, 8)}"
    if len(spec.distinct) == 3:
        line += f" witness={'pass' if verify_conjecture_witness(inst).passed else 'fail'}"
    print(line)
