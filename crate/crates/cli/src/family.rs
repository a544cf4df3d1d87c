//! Graph families for `sweep`.
//!
//! ```text
//! prism                  one builtin
//! path:1..8              a builtin family over a range (path, star, cycle, complete, empty)
//! trees:7                every tree on 7 vertices up to isomorphism
//! graphs:5               every graph on 5 vertices up to isomorphism
//! connected:5            the connected ones among those
//! gnp:7:0.5:100          100 seeded G(7, 0.5) samples
//! random-trees:9:50      50 seeded trees on 1..=9 vertices
//! random-forests:9:50    50 seeded forests on 1..=9 vertices
//! ```

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slowcolor::graph::is_connected_within;
use slowcolor::library;
use slowcolor::Instance;

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().ok().with_context(|| format!("bad {what} '{s}'"))
}

pub fn expand(spec: &str, seed: u64) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts: Vec<&str> = spec.split(':').collect();
    let out = match parts.as_slice() {
        [family, range] if range.contains("..") => {
            let (lo, hi) = range.split_once("..").expect("checked");
            let hi = hi.trim_start_matches('=');
            let (lo, hi): (usize, usize) = (number(lo, "range start")?, number(hi, "range end")?);
            (lo..=hi)
                .map(|n| Instance::builtin(&format!("{family}:{n}")).map_err(anyhow::Error::from))
                .collect::<Result<Vec<_>>>()?
        }
        ["trees", n] => {
            let n = number(n, "vertex count")?;
            if !(1..=10).contains(&n) {
                bail!("trees:N supports 1..=10");
            }
            library::all_trees(n)
                .into_iter()
                .enumerate()
                .map(|(i, t)| Instance::new(format!("tree:{n}#{i}"), t))
                .collect()
        }
        [kind @ ("graphs" | "connected"), n] => {
            let n = number(n, "vertex count")?;
            if !(1..=6).contains(&n) {
                bail!("{kind}:N supports 1..=6");
            }
            library::all_graphs_up_to_iso(n)
                .into_iter()
                .filter(|g| *kind == "graphs" || is_connected_within(g, g.vertices()))
                .enumerate()
                .map(|(i, g)| Instance::new(format!("{kind}:{n}#{i}"), g))
                .collect()
        }
        ["gnp", n, p, count] => {
            let (n, p, count): (usize, f64, usize) = (number(n, "n")?, number(p, "p")?, number(count, "count")?);
            if !(1..=64).contains(&n) || !(0.0..=1.0).contains(&p) {
                bail!("gnp needs 1 <= n <= 64 and 0 <= p <= 1");
            }
            (0..count).map(|i| Instance::new(format!("gnp:{n}:{p}#{i}"), library::random_gnp(n, p, &mut rng))).collect()
        }
        [kind @ ("random-trees" | "random-forests"), max, count] => {
            let (max, count): (usize, usize) = (number(max, "max n")?, number(count, "count")?);
            if !(1..=64).contains(&max) {
                bail!("{kind} needs 1 <= N <= 64");
            }
            (0..count)
                .map(|i| {
                    let n = rng.gen_range(1..=max);
                    let g = if *kind == "random-trees" {
                        library::random_tree(n, &mut rng)
                    } else {
                        library::random_forest(n, 0.7, &mut rng)
                    };
                    Instance::new(format!("{kind}#{i}:n={n}"), g)
                })
                .collect()
        }
        _ => vec![Instance::builtin(spec).with_context(|| format!("unknown family '{spec}'"))?],
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        let paths = expand("path:1..4", 0).unwrap();
        assert_eq!(paths.iter().map(|i| i.graph.n()).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert_eq!(expand("trees:6", 0).unwrap().len(), 6);
        assert_eq!(expand("graphs:4", 0).unwrap().len(), 11);
        assert_eq!(expand("connected:4", 0).unwrap().len(), 6);
        assert_eq!(expand("prism", 0).unwrap()[0].graph.edge_count(), 9);
        let a = expand("gnp:6:0.5:3", 9).unwrap();
        let b = expand("gnp:6:0.5:3", 9).unwrap();
        assert_eq!(a, b);
        assert!(expand("random-trees:9:5", 1).unwrap().iter().all(|i| i.graph.n() <= 9));
        assert!(expand("nonsense:3", 0).is_err());
        assert!(expand("graphs:9", 0).is_err());
    }
}
