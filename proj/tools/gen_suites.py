#!/usr/bin/env python3
"""Regenerates the bundled workload suites in data/suites/.

Conv layers lower by im2col (M = output plane, N = output channels,
K = filter volume). BERT follows the attention and FC rows (M = output
features, N = tokens, K = input features). Matrix-vector workloads put the
single token on M.
"""

import argparse
import json
from collections import OrderedDict
from pathlib import Path


def conv(out_hw, out_ch, filt, in_ch):
    return (out_hw * out_hw, out_ch, filt * filt * in_ch)


def resnet50():
    layers = [conv(112, 64, 7, 3)]
    # (blocks, bottleneck width, output plane) per stage
    stages = [(3, 64, 56), (4, 128, 28), (6, 256, 14), (3, 512, 7)]
    in_ch, plane = 64, 56
    for blocks, width, out_plane in stages:
        out_ch = 4 * width
        for b in range(blocks):
            # The first block reduces at the 3x3 conv and projects the shortcut.
            layers.append(conv(plane if b == 0 else out_plane, width, 1, in_ch))
            layers.append(conv(out_plane, width, 3, width))
            layers.append(conv(out_plane, out_ch, 1, width))
            if b == 0:
                layers.append(conv(out_plane, out_ch, 1, in_ch))
            in_ch = out_ch
        plane = out_plane
    layers.append((1, 1000, 2048))
    return layers


def bert_large(seq=512, emb=1024, ffn=4096, blocks=24):
    per_block = [
        (emb, seq, emb),  # Q, K, V and output projections
        (emb, seq, emb),
        (emb, seq, emb),
        (emb, seq, emb),
        (seq, seq, emb),  # QK^T
        (emb, seq, seq),  # (QK^T)V
        (ffn, seq, emb),
        (emb, seq, ffn),
    ]
    return per_block * blocks


def gpt_j_decode(d=4096, ffn=16384, heads=16, head_dim=256, ctx=2048, blocks=28, vocab=50400):
    per_block = [(1, d, d)] * 4 + [(1, ffn, d), (1, d, ffn)]
    per_block += [(1, ctx, head_dim), (1, head_dim, ctx)] * heads
    return per_block * blocks + [(1, vocab, d)]


def dlrm():
    bottom = [(1, 512, 13), (1, 256, 512), (1, 128, 256)]
    top = [(1, 1024, 479), (1, 1024, 1024), (1, 512, 1024), (1, 256, 512), (1, 1, 256)]
    return bottom + top


SUITES = {
    "resnet50-imagenet": resnet50,
    "bert-large-seq512": bert_large,
    "gpt-j-decode": gpt_j_decode,
    "dlrm": dlrm,
}


def to_suite(name, shapes, bp=8):
    counts = OrderedDict()
    for s in shapes:
        counts[s] = counts.get(s, 0) + 1
    entries = [{"m": m, "n": n, "k": k, "bp": bp, "count": c} for (m, n, k), c in counts.items()]
    return {"name": name, "entries": entries}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    default_out = Path(__file__).resolve().parent.parent / "data" / "suites"
    parser.add_argument("--out", type=Path, default=default_out)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, build in SUITES.items():
        path = args.out / f"{name}.json"
        path.write_text(json.dumps(to_suite(name, build()), indent=2) + "\n")
        print(path)


if __name__ == "__main__":
    main()
