use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::qubo::QuboModel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub assignment: Vec<bool>,
    pub energy: BigInt,
    pub occurrences: u64,
}

impl Sample {
    /// Assignment as a string of `0`/`1`, variable 0 first.
    pub fn bitstring(&self) -> String {
        self.assignment.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl Serialize for Sample {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Sample", 3)?;
        st.serialize_field("assignment", &self.bitstring())?;
        st.serialize_field("energy", &self.energy.to_string())?;
        st.serialize_field("occurrences", &self.occurrences)?;
        st.end()
    }
}

/// Distinct assignments ordered by energy, then lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SampleSet {
    samples: Vec<Sample>,
}

impl SampleSet {
    /// Builds a set from raw `(assignment, occurrences)` pairs, merging
    /// duplicates and evaluating every energy exactly against `model`.
    ///
    /// Panics if an assignment has the wrong length.
    pub fn from_assignments(model: &QuboModel, raw: impl IntoIterator<Item = (Vec<bool>, u64)>) -> Self {
        let mut merged: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
        for (a, count) in raw {
            *merged.entry(a).or_default() += count;
        }
        let mut samples: Vec<Sample> = merged
            .into_iter()
            .map(|(assignment, occurrences)| {
                let energy = model.energy(&assignment).expect("assignment length matches model");
                Sample { assignment, energy, occurrences }
            })
            .collect();
        samples.sort_by(|a, b| a.energy.cmp(&b.energy).then_with(|| a.assignment.cmp(&b.assignment)));
        Self { samples }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sample> {
        self.samples.iter()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn min_energy(&self) -> Option<&BigInt> {
        self.samples.first().map(|s| &s.energy)
    }

    pub fn truncate(&mut self, len: usize) {
        self.samples.truncate(len);
    }

    /// Canonical JSON bytes, for comparing runs.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sample set serializes")
    }
}

impl<'a> IntoIterator for &'a SampleSet {
    type Item = &'a Sample;
    type IntoIter = std::slice::Iter<'a, Sample>;

    fn into_iter(self) -> Self::IntoIter {
        self.samples.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::tests::bi;
    use num_bigint::BigUint;

    #[test]
    fn merges_and_orders() {
        let mut m = QuboModel::new(2);
        m.add_squared_linear(&[(0, bi(1)), (1, bi(1))], &bi(-1), &BigUint::from(1u32)).unwrap();
        let set = SampleSet::from_assignments(
            &m,
            vec![(vec![true, true], 1), (vec![false, true], 2), (vec![true, false], 1), (vec![false, true], 3)],
        );
        let order: Vec<(String, i64, u64)> = set
            .iter()
            .map(|s| (s.bitstring(), s.energy.to_string().parse().unwrap(), s.occurrences))
            .collect();
        assert_eq!(order, vec![("01".into(), 0, 5), ("10".into(), 0, 1), ("11".into(), 1, 1)]);
        assert_eq!(set.min_energy(), Some(&bi(0)));
        assert_eq!(
            set.to_json(),
            r#"{"samples":[{"assignment":"01","energy":"0","occurrences":5},{"assignment":"10","energy":"0","occurrences":1},{"assignment":"11","energy":"1","occurrences":1}]}"#
        );
    }
}
