"""Write the shipped problem, machine and instance files into fixtures/."""
import argparse
import random
from pathlib import Path

from lclpaths.codec import encode
from lclpaths.core import PATH, Instance, random_ids, random_instance
from lclpaths.fixtures import shipped
from lclpaths.lba import binary_counter, encode_good_input, looping_machine, unary_counter


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    written = []

    def put(name, obj):
        (out / name).write_bytes(encode(obj))
        written.append(name)

    for key, problem in shipped().items():
        put(f"{key}.lcl.json", problem)
        put(f"{key}.cycle32.instance.json", random_instance(problem, 32, rng))
    for make in (unary_counter, binary_counter):
        for B in (2, 3, 4):
            m = make(B)
            put(f"{m.name}_B{B}.lba.json", m)
    put("looping_B3.lba.json", looping_machine(3))
    m = unary_counter(3)
    labels = encode_good_input(m, n=24)
    put("unary_counter_B3.good.instance.json", Instance(PATH, labels, random_ids(len(labels), rng)))
    print("\n".join(written))


if __name__ == "__main__":
    main()
