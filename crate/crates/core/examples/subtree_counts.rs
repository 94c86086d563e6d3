//! Rooted k-vertex subtrees of the d-ary tree, binom(dk, k-1)/k.

use pcf::tree::count_subtrees;

fn main() {
    for d in [2u32, 3] {
        let row: Vec<String> = (1..=10)
            .map(|k| count_subtrees(d, k).exact().expect("small counts are exact").to_string())
            .collect();
        println!("d={d}: {}", row.join(" "));
    }
    println!("ln N_100000 (d=2) = {:.6}", count_subtrees(2, 100_000).ln());
}
