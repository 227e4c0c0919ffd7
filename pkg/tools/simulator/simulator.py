import argparse
import os
from concurrent.futures import ThreadPoolExecutor, as_completed

from tqdm import tqdm

from fairspread.graph import census, generate_sbm, save_graph

# block sizes and edge probabilities matching the size, density and homophily of the survey datasets
SCALES = {
    "iv": (24, 66, 0.0723, 0.0398),
    "hs": (54, 79, 0.0539, 0.037),
    "av": (245, 255, 0.01262, 0.00293),
}

THREAD_POOL = 4


def write_dataset(out_dir: str, scale: str, seed: int) -> dict:
    n1, n2, p_in, p_out = SCALES[scale]
    g = generate_sbm(n1, n2, p_in, p_out, seed)
    stem = os.path.join(out_dir, f"{scale}_{seed}")
    save_graph(g, f"{stem}.edges", f"{stem}.attrs")
    stats = census(g)
    return {"dataset": f"{scale}_{seed}", "nodes": stats.node_count, "edges": stats.edge_count,
            "avg_degree": round(stats.avg_degree, 2), "diameter": stats.diameter,
            "minority": round(100 * stats.minority_fraction, 1),
            "cross_edges": round(stats.cross_edge_fraction, 3)}


def run():
    parser = argparse.ArgumentParser(description="writes synthetic two-group datasets in the fairspread format")
    parser.add_argument("--out", default="datasets")
    parser.add_argument("--scales", default=",".join(SCALES))
    parser.add_argument("--seeds", type=int, default=5, help="datasets per scale")
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    jobs = [(scale, seed) for scale in args.scales.split(",") for seed in range(args.seeds)]
    with ThreadPoolExecutor(max_workers=THREAD_POOL) as executor:
        futures = [executor.submit(write_dataset, args.out, scale, seed) for scale, seed in jobs]
        rows = [f.result() for f in tqdm(as_completed(futures), total=len(futures))]

    for row in sorted(rows, key=lambda r: r["dataset"]):
        print(row)


if __name__ == "__main__":
    run()
