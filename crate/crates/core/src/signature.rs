//! The `i`-signature rule: cancel adjacent `(0, 1)` pairs in a word of 0s
//! and 1s until it reads `1…1 0…0`.

/// A reduced signature. Runs keep the component each symbol came from,
/// in reading order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature<T> {
    pub ones: Vec<(T, u64)>,
    pub zeros: Vec<(T, u64)>,
}

impl<T> Signature<T> {
    pub fn num_ones(&self) -> u64 {
        self.ones.iter().map(|(_, k)| k).sum()
    }

    pub fn num_zeros(&self) -> u64 {
        self.zeros.iter().map(|(_, k)| k).sum()
    }

    /// Origin of the leftmost surviving 0, where `f̃_i` acts.
    pub fn leftmost_zero(&self) -> Option<&T> {
        self.zeros.first().map(|(t, _)| t)
    }

    /// Origin of the rightmost surviving 1, where `ẽ_i` acts.
    pub fn rightmost_one(&self) -> Option<&T> {
        self.ones.last().map(|(t, _)| t)
    }

    /// The reduced word, e.g. `"110"`.
    pub fn word(&self) -> String {
        let ones = "1".repeat(self.num_ones() as usize);
        let zeros = "0".repeat(self.num_zeros() as usize);
        ones + &zeros
    }
}

/// Reduces a word given as components `(ones, zeros, origin)`, each
/// contributing its 1s followed by its 0s. A 1 cancels the nearest
/// uncancelled 0 to its left.
pub fn reduce<T>(components: impl IntoIterator<Item = (u64, u64, T)>) -> Signature<T>
where
    T: Clone,
{
    let mut ones = Vec::new();
    let mut open: Vec<(T, u64)> = Vec::new();
    for (mut k1, k0, origin) in components {
        while k1 > 0 {
            let Some(top) = open.last_mut() else { break };
            let c = top.1.min(k1);
            top.1 -= c;
            k1 -= c;
            if top.1 == 0 {
                open.pop();
            }
        }
        if k1 > 0 {
            ones.push((origin.clone(), k1));
        }
        if k0 > 0 {
            open.push((origin, k0));
        }
    }
    Signature { ones, zeros: open }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(word: &[u8]) -> String {
        let mut w: Vec<u8> = word.to_vec();
        loop {
            let pos = w.windows(2).position(|p| p == [0, 1]);
            match pos {
                Some(p) => {
                    w.drain(p..p + 2);
                }
                None => break,
            }
        }
        w.iter().map(|d| d.to_string()).collect()
    }

    #[test]
    fn small_words() {
        let s = reduce([(0, 1, 'a'), (1, 0, 'b'), (1, 0, 'c'), (0, 1, 'd')]);
        assert_eq!(s.word(), "10");
        assert_eq!(s.rightmost_one(), Some(&'c'));
        assert_eq!(s.leftmost_zero(), Some(&'d'));
        let empty = reduce(Vec::<(u64, u64, ())>::new());
        assert_eq!(empty.word(), "");
        assert_eq!(empty.leftmost_zero(), None);
    }

    #[test]
    fn component_ones_precede_its_zeros() {
        assert_eq!(reduce([(1, 1, ())]).word(), "10");
        assert_eq!(reduce([(0, 1, 0), (2, 3, 1)]).word(), "1000");
    }

    proptest! {
        #[test]
        fn matches_pairwise_cancellation(word in prop::collection::vec(0u8..=1, 0..30)) {
            let comps = word.iter().enumerate().map(|(k, &d)| {
                if d == 1 { (1, 0, k) } else { (0, 1, k) }
            });
            let s = reduce(comps);
            prop_assert_eq!(s.word(), naive(&word));
        }

        #[test]
        fn run_lengths_match_expansion(runs in prop::collection::vec((0u64..4, 0u64..4), 0..10)) {
            let mut word = Vec::new();
            for &(a, b) in &runs {
                word.extend(std::iter::repeat_n(1, a as usize));
                word.extend(std::iter::repeat_n(0, b as usize));
            }
            let s = reduce(runs.iter().enumerate().map(|(k, &(a, b))| (a, b, k)));
            prop_assert_eq!(s.word(), naive(&word));
        }
    }
}
