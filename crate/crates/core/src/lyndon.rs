//! Lyndon words over a graded alphabet.

use crate::error::{Error, Result};
use crate::schedule::{GeneratorSchedule, Word};

/// A nonempty word is Lyndon when it is strictly smaller than each of its
/// proper suffixes.
pub fn is_lyndon(word: &[u32]) -> bool {
    !word.is_empty() && (1..word.len()).all(|i| word < &word[i..])
}

/// Standard factorization `w = u v` where `v` is the longest proper suffix
/// that is itself Lyndon. Returns `None` for single letters.
pub fn standard_factorization(word: &[u32]) -> Option<(&[u32], &[u32])> {
    debug_assert!(is_lyndon(word));
    (1..word.len())
        .find(|&i| is_lyndon(&word[i..]))
        .map(|i| word.split_at(i))
}

/// Lyndon words of the given Samelson degree, lexicographically ordered.
///
/// Walks prenecklaces in the Fredricksen-Kessler-Maiorana manner, pruning on
/// the remaining degree; a completed prenecklace is Lyndon iff its period
/// equals its length.
pub fn lyndon_words(schedule: &GeneratorSchedule, degree: u32) -> Result<Vec<Word>> {
    if degree > schedule.degree_cap() {
        return Err(Error::DegreeCapExceeded {
            degree,
            cap: schedule.degree_cap(),
        });
    }
    let mut out = Vec::new();
    if degree == 0 || degree % 2 == 1 || schedule.is_empty() {
        return Ok(out);
    }
    extend(schedule, degree, &mut Vec::new(), 1, &mut out);
    Ok(out)
}

fn extend(s: &GeneratorSchedule, rem: u32, word: &mut Vec<u32>, period: usize, out: &mut Vec<Word>) {
    if rem == 0 {
        if period == word.len() {
            out.push(Word(word.clone()));
        }
        return;
    }
    let i = word.len();
    let start = if i == 0 { 1 } else { word[i - period] };
    for c in start..=s.len() as u32 {
        let d = s.degree(c);
        if d > rem {
            break;
        }
        let p = if i == 0 || c == word[i - period] { period } else { i + 1 };
        word.push(c);
        extend(s, rem - d, word, p, out);
        word.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_predicate() {
        assert!(is_lyndon(&[1]));
        assert!(is_lyndon(&[1, 2]));
        assert!(is_lyndon(&[1, 1, 2]));
        assert!(is_lyndon(&[1, 2, 2]));
        assert!(!is_lyndon(&[2, 1]));
        assert!(!is_lyndon(&[1, 1]));
        assert!(!is_lyndon(&[1, 2, 1, 2]));
        assert!(!is_lyndon(&[]));
    }

    #[test]
    fn standard_factorizations() {
        assert_eq!(standard_factorization(&[1, 2]), Some((&[1][..], &[2][..])));
        assert_eq!(standard_factorization(&[1, 1, 2]), Some((&[1][..], &[1, 2][..])));
        assert_eq!(standard_factorization(&[1, 2, 2]), Some((&[1, 2][..], &[2][..])));
        assert_eq!(standard_factorization(&[1, 1, 2, 1, 2]), Some((&[1, 1, 2][..], &[1, 2][..])));
        assert_eq!(standard_factorization(&[3]), None);
    }

    #[test]
    fn generated_words_are_exactly_the_lyndon_compositions() {
        let s = GeneratorSchedule::hp(8);
        for n in 1..=8u32 {
            let fast = lyndon_words(&s, 4 * n).unwrap();
            let slow: Vec<Word> = s
                .words_of_degree(4 * n)
                .into_iter()
                .filter(|w| is_lyndon(w))
                .collect();
            assert_eq!(fast, slow, "weight {n}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let s = GeneratorSchedule::hp(3).with_degree_cap(12);
        assert!(lyndon_words(&s, 12).is_ok());
        assert!(matches!(
            lyndon_words(&s, 16),
            Err(Error::DegreeCapExceeded { degree: 16, cap: 12 })
        ));
    }
}
