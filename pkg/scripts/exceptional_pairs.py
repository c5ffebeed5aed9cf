"""Full exact analysis of the parameter sets that survive every integrality filter."""

from tridesign.feasibility import classify

PAIRS = [(341, 3744), (638, 7011), (727, 9200)]

for n, T in PAIRS:
    rep = classify(n, n * T // 2)
    print(f"(n, T) = ({n}, {T})  M = {rep.parameters.M}  {rep.status.value}")
    print("  inner products", ", ".join(map(str, rep.inner_products)))
    print("  distribution  ", ", ".join(map(str, rep.distribution)))
    for d in rep.derived:
        pairs = "  ".join(f"{t}: {v}" for t, v in zip(d.derived_inner_products, d.distribution))
        print(f"  derived {d.which} ({d.cardinality} points) {d.verdict.value}")
        print(f"    {pairs}")
