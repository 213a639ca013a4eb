//! Reference implementations shared by the oracle and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use stitkit::btac::BtFrame;
use stitkit::nbhd::{is_antichain, Subset};

/// Every strict order on `n` labelled moments satisfying the tree axioms,
/// built as the transitive closure of an acyclic parent function.
pub fn all_forests(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut parent = vec![0; n];
    loop {
        let acyclic = (0..n).all(|start| {
            let mut cur = start;
            for _ in 0..=n {
                if parent[cur] == n {
                    return true;
                }
                cur = parent[cur];
            }
            false
        });
        if acyclic {
            let mut pairs = Vec::new();
            for m in 0..n {
                let mut up = parent[m];
                while up != n {
                    pairs.push((up, m));
                    up = parent[up];
                }
            }
            out.push(pairs);
        }
        // Odometer over parent[i] in 0..=n (n meaning "root").
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            parent[i] += 1;
            if parent[i] <= n {
                break;
            }
            parent[i] = 0;
            i += 1;
        }
    }
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("t{i}")).collect()
}

pub fn frame_of(n: usize, pairs: &[(usize, usize)]) -> BtFrame {
    let names = names(n);
    let order: Vec<(String, String)> = pairs.iter().map(|&(a, b)| (names[a].clone(), names[b].clone())).collect();
    BtFrame::new(names, &order).unwrap()
}

/// Maximal chains by trying every subset.
pub fn brute_force_histories(n: usize, pairs: &[(usize, usize)]) -> BTreeSet<u64> {
    let less = |a: usize, b: usize| pairs.contains(&(a, b));
    let comparable = |a: usize, b: usize| a == b || less(a, b) || less(b, a);
    let is_chain = |s: u64| (0..n).all(|a| s >> a & 1 == 0 || (0..n).all(|b| s >> b & 1 == 0 || comparable(a, b)));
    let chains: Vec<u64> = (1..1u64 << n).filter(|&s| is_chain(s)).collect();
    chains
        .iter()
        .copied()
        .filter(|&s| (0..n).all(|x| s >> x & 1 == 1 || !is_chain(s | 1 << x)))
        .collect()
}

/// All nonempty antichains of nonempty subsets of an `n`-set.
pub fn all_antichains(n: usize) -> Vec<Vec<Subset>> {
    let subsets: Vec<Subset> = (1..1u64 << n).map(Subset).collect();
    let mut out = Vec::new();
    for code in 1u64..1 << subsets.len() {
        let family: Vec<Subset> = (0..subsets.len()).filter(|i| code >> i & 1 == 1).map(|i| subsets[i]).collect();
        if family.len() <= n + 2 && is_antichain(&family) {
            out.push(family);
        }
    }
    out
}

/// Membership in the up-closure of `family`, materialized as a set of masks.
pub fn up_closure(n: usize, family: &[Subset]) -> BTreeSet<u64> {
    (0..1u64 << n).filter(|&x| family.iter().any(|g| g.0 & !x == 0)).collect()
}
