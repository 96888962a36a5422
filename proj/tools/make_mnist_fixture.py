#!/usr/bin/env python3
# Regenerates tests/data/mnist_pixel_{train,test}.csv from the 5,000-image
# MNIST subset shipped inside the mlxtend wheel (mlxtend/data/data/mnist_5k.csv.gz,
# BSD-3-Clause). Rows are sorted by class there, 500 per class; we take the
# first 200 of each class for training and the next 50 for testing, then
# interleave classes. Pixels stay as raw 0..255 intensities.
import gzip
import sys
import zipfile

import numpy as np


def main(wheel, out_dir):
    raw = zipfile.ZipFile(wheel).read("mlxtend/data/data/mnist_5k.csv.gz")
    data = np.loadtxt(gzip.decompress(raw).decode().splitlines(), delimiter=",")
    pixels, labels = data[:, :-1].astype(np.int64), data[:, -1].astype(np.int64)
    train, test = [], []
    for c in range(10):
        rows = np.flatnonzero(labels == c)
        train.append(rows[:200])
        test.append(rows[200:250])
    train = np.stack(train, axis=1).reshape(-1)
    test = np.stack(test, axis=1).reshape(-1)
    for name, idx in (("train", train), ("test", test)):
        with open(f"{out_dir}/mnist_pixel_{name}.csv", "w") as f:
            for row in pixels[idx]:
                f.write(",".join(str(v) for v in row) + "\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
