#![allow(dead_code)]

use cyclic_orbit::{Configuration, Permutation};
use proptest::prelude::*;

/// Every permutation of `0..n` as an image vector, in lexicographic order.
pub fn all_mappings(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                extend(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Word number `index` of length `n` over `alphabet`, least significant
/// symbol first.
pub fn word(mut index: usize, n: usize, alphabet: &[char]) -> Configuration {
    let base = alphabet.len();
    Configuration::new(
        (0..n)
            .map(|_| {
                let c = alphabet[index % base];
                index /= base;
                c
            })
            .collect(),
    )
}

/// A permutation of degree `1..=max_n` whose cycles list their elements in
/// an arbitrary (not necessarily smallest-first) order.
pub fn arb_permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (Just(n), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(0..n, n))
        })
        .prop_map(|(n, order, rotations)| {
            // Reading `order` as one long word and cutting it at random points
            // yields disjoint cycles; rotating each cycle changes its listed start.
            let mut cycles = Vec::new();
            let mut start = 0;
            let mut cut = 0;
            while start < n {
                let len = 1 + rotations[cut] % (n - start);
                let mut c: Vec<usize> = order[start..start + len].iter().map(|x| x + 1).collect();
                c.rotate_left(rotations[(cut + 1) % n] % len);
                cycles.push(c);
                start += len;
                cut += 1;
            }
            Permutation::from_cycles(n, cycles).expect("disjoint cycles")
        })
}

pub fn arb_word(n: usize, alphabet: &'static [char]) -> impl Strategy<Value = Configuration> {
    proptest::collection::vec(proptest::sample::select(alphabet), n).prop_map(Configuration::new)
}

/// A permutation together with two words over `alphabet` of matching length.
pub fn arb_instance(
    max_n: usize,
    alphabet: &'static [char],
) -> impl Strategy<Value = (Permutation, Configuration, Configuration)> {
    arb_permutation(max_n).prop_flat_map(move |g| {
        let n = g.degree();
        (Just(g), arb_word(n, alphabet), arb_word(n, alphabet))
    })
}
