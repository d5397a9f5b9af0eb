#!/usr/bin/env python3
# Copyright 2026 The flnoise Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Build the desk-scale MNIST subset shipped in data/mnist-desk.tar.gz.

Source: the `mnist` npm package (10,000 MNIST digits stored as per-class JSON
arrays of pixel intensities in [0, 1], rounded to three decimals). Fetch it with
`npm pack mnist` and pass the extracted `package/` directory.

The digits are pooled, shuffled with a fixed seed and split 8,000 / 2,000 into
standard big-endian IDX files (magic 0x00000803 for images, 0x00000801 for
labels).
"""
import argparse
import io
import json
import pathlib
import random
import struct
import tarfile

SIDE = 28


def idx_images(images):
    header = struct.pack(">IIII", 0x00000803, len(images), SIDE, SIDE)
    return header + b"".join(bytes(img) for img in images)


def idx_labels(labels):
    return struct.pack(">II", 0x00000801, len(labels)) + bytes(labels)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("package_dir", type=pathlib.Path)
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path("data/mnist-desk.tar.gz"))
    parser.add_argument("--train", type=int, default=8000)
    parser.add_argument("--seed", type=int, default=20230)
    args = parser.parse_args()

    examples = []
    for digit in range(10):
        raw = json.loads((args.package_dir / "src" / "digits" / f"{digit}.json").read_text())["data"]
        for start in range(0, len(raw) - SIDE * SIDE + 1, SIDE * SIDE):
            pixels = [min(255, max(0, round(v * 255))) for v in raw[start:start + SIDE * SIDE]]
            examples.append((pixels, digit))
    random.Random(args.seed).shuffle(examples)

    splits = {"train": examples[:args.train], "t10k": examples[args.train:]}
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with tarfile.open(args.out, "w:gz") as tar:
        for prefix, rows in splits.items():
            for name, payload in ((f"{prefix}-images-idx3-ubyte", idx_images([r[0] for r in rows])),
                                  (f"{prefix}-labels-idx1-ubyte", idx_labels([r[1] for r in rows]))):
                info = tarfile.TarInfo(f"mnist-desk/{name}")
                info.size = len(payload)
                info.mtime = 0
                tar.addfile(info, io.BytesIO(payload))
    print(f"wrote {args.out}: {len(splits['train'])} train, {len(splits['t10k'])} test")


if __name__ == "__main__":
    main()
