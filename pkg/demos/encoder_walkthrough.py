"""Encode a few matroids, print the records, and decode them again.

The cycle matroid of K4 has four triangles as circuit-hyperplanes, so it is
sparse paving and its encoding is tiny.  A matroid with a parallel pair is
not sparse paving; the flats in Z carry the extra structure.

    python3 demos/encoder_walkthrough.py
"""
from sparsematroids.encoder import decode, encode_trace
from sparsematroids.formats import format_encoding, format_matroid, parse_encoding_record
from sparsematroids.johnson import elements_of, iter_bits, johnson
from sparsematroids.matroid import Matroid, graphic, nonbasis_partition

K4 = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def parallel_pair():
    # rank 3 on [6]: every 3-set not containing both 1 and 2
    G = johnson(6, 3)
    bases = 0
    for i, X in enumerate(G.masks):
        if X & 0b11 != 0b11:
            bases |= 1 << i
    return Matroid(6, 3, bases)


def show(name, M):
    tr = encode_trace(M)
    enc = tr.encoding
    G = M.graph
    part = nonbasis_partition(M)
    print(f"{name}")
    print(f"  record     {format_matroid(M)}")
    print(f"  nonbases   {[elements_of(G.masks[i]) for i in iter_bits(M.nonbases)]}")
    print(f"  |U|={bin(part.U).count('1')} |W|={bin(part.W).count('1')}")
    print(f"  encoding   {format_encoding(enc)}")
    print(f"  |S|={bin(enc.S).count('1')} |Z|={len(enc.Z)} |A|={bin(tr.A).count('1')} "
          f"|P|={bin(tr.P).count('1')} t={enc.t}")
    back = decode(parse_encoding_record(format_encoding(enc)))
    print(f"  decodes back: {back.bases == M.bases}")
    print()


show("M(K4)", graphic(4, K4))
show("parallel pair in rank 3", parallel_pair())
