"""Find the 3-way junction of the 1E8O SRP Alu-domain fragment and print its features.

Run: python3 demos/junction_features.py
"""

from csminer import data_path
from csminer.features import ThermoParams, coaxial_stack_pairs, extract_features, format_feature_table
from csminer.junction import census_multiloops
from csminer.structio import read_ct, to_dot_bracket


def main() -> None:
    ct = read_ct(data_path("1e8o.ct"))
    print(ct.title)
    print(ct.sequence.residues)
    print(to_dot_bracket(ct.pairs))
    print()

    census = census_multiloops(ct.pairs, ct.sequence.residues, list(ct.origin_coords))
    (j,) = census.junctions
    s = j.coords
    print(f"3-way junction, strands {s[0]}-{s[1]}, {s[2]}-{s[3]}, {s[4]}-{s[5]}; family {j.family.value}")
    print(f"strand residues: {j.strseq1} / {j.strseq2} / {j.strseq3}")
    print(f"loops: J12={j.j12.bases or '-'}  J23={j.j23.bases or '-'}  J31={j.j31.bases or '-'}")

    # which terminal pairs meet across each loop
    for name, (a, b, loop) in coaxial_stack_pairs(j).items():
        print(f"  {name.upper()}: {a.identity}{a.positions} on {b.identity}{b.positions} across {len(loop)} nt")
    print()

    params = ThermoParams.load()
    print(format_feature_table(extract_features(j, params)), end="")


if __name__ == "__main__":
    main()
