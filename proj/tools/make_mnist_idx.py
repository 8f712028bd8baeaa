#!/usr/bin/env python3
# Copyright 2026 The repscope Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Convert the 10k MNIST digits shipped in the npm `mnist` package to IDX files.

The package stores each digit as 784 pixel values already divided by 255 and
rounded to three decimals, which is fine enough to recover the original bytes
exactly with round(v * 255).

Usage:
    npm pack mnist && tar xzf mnist-*.tgz
    python3 tools/make_mnist_idx.py package/src/digits data/mnist

Writes train-{images,labels} with all but the last `--test` digits (interleaved
by class, fixed seed) and t10k-{images,labels} with the remainder.
"""

import argparse
import json
import random
import struct
from pathlib import Path


def load_digits(src: Path):
    samples = []
    for label in range(10):
        blob = json.loads((src / f"{label}.json").read_text())
        flat = blob["data"]
        if len(flat) % 784:
            raise SystemExit(f"{label}.json: length {len(flat)} not a multiple of 784")
        for i in range(0, len(flat), 784):
            pixels = bytes(min(255, max(0, round(v * 255))) for v in flat[i:i + 784])
            samples.append((pixels, label))
    return samples


def write_idx(path: Path, samples, images: bool):
    with path.open("wb") as f:
        if images:
            f.write(bytes([0, 0, 0x08, 3]))
            f.write(struct.pack(">III", len(samples), 28, 28))
            for pixels, _ in samples:
                f.write(pixels)
        else:
            f.write(bytes([0, 0, 0x08, 1]))
            f.write(struct.pack(">I", len(samples)))
            f.write(bytes(label for _, label in samples))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("src", type=Path)
    ap.add_argument("dst", type=Path)
    ap.add_argument("--test", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20240501)
    args = ap.parse_args()

    samples = load_digits(args.src)
    random.Random(args.seed).shuffle(samples)
    train, test = samples[:-args.test], samples[-args.test:]
    args.dst.mkdir(parents=True, exist_ok=True)
    write_idx(args.dst / "train-images-idx3-ubyte", train, True)
    write_idx(args.dst / "train-labels-idx1-ubyte", train, False)
    write_idx(args.dst / "t10k-images-idx3-ubyte", test, True)
    write_idx(args.dst / "t10k-labels-idx1-ubyte", test, False)
    print(f"train={len(train)} test={len(test)}")


if __name__ == "__main__":
    main()
