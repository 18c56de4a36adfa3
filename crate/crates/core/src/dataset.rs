use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::class::TrafficClass;
use crate::error::{CoreError, CoreResult};

/// Standard ifEntry counters used when no schema is supplied.
pub const INTERFACE_COUNTERS: [&str; 11] = [
    "ifInOctets",
    "ifOutOctets",
    "ifInUcastPkts",
    "ifOutUcastPkts",
    "ifInNUcastPkts",
    "ifOutNUcastPkts",
    "ifInDiscards",
    "ifOutDiscards",
    "ifInErrors",
    "ifOutErrors",
    "ifOutQLen",
];

/// One column of the feature schema: a counter delta per polling interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributeSpec {
    pub name: String,
    pub index: usize,
}

pub fn default_interface_schema() -> Vec<AttributeSpec> {
    INTERFACE_COUNTERS.iter().enumerate().map(|(index, name)| AttributeSpec { name: name.to_string(), index }).collect()
}

/// FNV-1a over the attribute names, newline separated.
pub fn fingerprint<S: AsRef<str>>(names: &[S]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for (i, name) in names.iter().enumerate() {
        if i > 0 {
            h ^= u64::from(b'\n');
            h = h.wrapping_mul(PRIME);
        }
        for b in name.as_ref().bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}

/// A single polling-interval feature row.
#[derive(Clone, Debug, PartialEq)]
pub struct MibRecord {
    pub values: Vec<f64>,
    pub label: Option<TrafficClass>,
}

impl MibRecord {
    pub fn new(values: Vec<f64>, label: Option<TrafficClass>) -> Self {
        MibRecord { values, label }
    }

    pub fn labeled(values: Vec<f64>, label: TrafficClass) -> Self {
        MibRecord { values, label: Some(label) }
    }
}

/// Records that conform to one schema. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    schema: Vec<AttributeSpec>,
    records: Vec<MibRecord>,
    provenance: String,
}

impl Dataset {
    /// Validates every record against the schema: arity matches and each
    /// value is finite and non-negative. Attribute names must be unique.
    pub fn new<S: Into<String>>(names: Vec<String>, records: Vec<MibRecord>, provenance: S) -> CoreResult<Dataset> {
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(CoreError::DuplicateAttribute { index: i });
            }
        }
        let width = names.len();
        for (index, r) in records.iter().enumerate() {
            if r.values.len() != width {
                return Err(CoreError::ArityMismatch { index, expected: width, found: r.values.len() });
            }
            if let Some(attribute) = r.values.iter().position(|v| !v.is_finite() || *v < 0.0) {
                return Err(CoreError::InvalidValue { index, attribute });
            }
        }
        let schema = names.into_iter().enumerate().map(|(index, name)| AttributeSpec { name, index }).collect();
        Ok(Dataset { schema, records, provenance: provenance.into() })
    }

    pub fn schema(&self) -> &[AttributeSpec] {
        &self.schema
    }

    pub fn attribute_names(&self) -> Vec<String> {
        self.schema.iter().map(|a| a.name.clone()).collect()
    }

    pub fn num_attributes(&self) -> usize {
        self.schema.len()
    }

    pub fn fingerprint(&self) -> u64 {
        let names: Vec<&str> = self.schema.iter().map(|a| a.name.as_str()).collect();
        fingerprint(&names)
    }

    pub fn records(&self) -> &[MibRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// All labels, or the index of the first unlabeled record.
    pub fn labels(&self) -> CoreResult<Vec<TrafficClass>> {
        self.records.iter().enumerate().map(|(index, r)| r.label.ok_or(CoreError::UnlabeledRecord { index })).collect()
    }

    /// Copy with each label passed through `f`; unlabeled records stay unlabeled.
    pub fn map_labels<F: Fn(TrafficClass) -> TrafficClass>(&self, f: F) -> Dataset {
        let records =
            self.records.iter().map(|r| MibRecord { values: r.values.clone(), label: r.label.map(&f) }).collect();
        Dataset { schema: self.schema.clone(), records, provenance: self.provenance.clone() }
    }

    /// Records at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize], provenance: &str) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
            provenance: provenance.to_string(),
        }
    }
}

/// Per-class record counts in canonical class order.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassHistogram(pub [usize; TrafficClass::COUNT]);

impl ClassHistogram {
    pub fn get(&self, c: TrafficClass) -> usize {
        self.0[c.index()]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TrafficClass, usize)> + '_ {
        TrafficClass::ALL.iter().map(move |&c| (c, self.0[c.index()]))
    }

    /// Most frequent class, ties toward canonical order.
    pub fn plurality(&self) -> TrafficClass {
        TrafficClass::ALL[crate::math::argmax(&self.0)]
    }
}

pub fn class_histogram(ds: &Dataset) -> CoreResult<ClassHistogram> {
    let mut h = ClassHistogram::default();
    for c in ds.labels()? {
        h.0[c.index()] += 1;
    }
    Ok(h)
}

/// Number of the `n` records of one class that go to the training side.
pub(crate) fn train_share(n: usize, fraction: f64) -> usize {
    // The epsilon absorbs representation error such as 0.7 * 960 landing
    // a hair below 672.
    let k = libm::floor(fraction * n as f64 + 1e-9) as usize;
    k.min(n)
}

/// Per-class holdout split: `floor(fraction * n_c)` records of each class go
/// to training, the rest to test. Within each class the choice is a seeded
/// uniform shuffle. Both halves keep the original record order.
pub fn stratified_split(ds: &Dataset, fraction: f64, seed: u64) -> CoreResult<(Dataset, Dataset)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(CoreError::InvalidFraction);
    }
    let labels = ds.labels()?;
    let mut per_class: [Vec<usize>; TrafficClass::COUNT] = Default::default();
    for (i, c) in labels.iter().enumerate() {
        per_class[c.index()].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for members in per_class.iter_mut() {
        let k = train_share(members.len(), fraction);
        members.shuffle(&mut rng);
        train.extend_from_slice(&members[..k]);
        test.extend_from_slice(&members[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((
        ds.subset(&train, &alloc::format!("{}#train", ds.provenance)),
        ds.subset(&test, &alloc::format!("{}#test", ds.provenance)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_bad_records() {
        let r = MibRecord::labeled(vec![1.0], TrafficClass::Normal);
        assert_eq!(
            Dataset::new(names(&["a", "b"]), vec![r], "t").unwrap_err(),
            CoreError::ArityMismatch { index: 0, expected: 2, found: 1 }
        );
        let r = MibRecord::labeled(vec![1.0, -2.0], TrafficClass::Normal);
        assert_eq!(
            Dataset::new(names(&["a", "b"]), vec![r], "t").unwrap_err(),
            CoreError::InvalidValue { index: 0, attribute: 1 }
        );
        let r = MibRecord::labeled(vec![f64::NAN, 0.0], TrafficClass::Normal);
        assert!(Dataset::new(names(&["a", "b"]), vec![r], "t").is_err());
        assert_eq!(
            Dataset::new(names(&["a", "a"]), vec![], "t").unwrap_err(),
            CoreError::DuplicateAttribute { index: 1 }
        );
    }

    #[test]
    fn histogram_cases() {
        let empty = Dataset::new(names(&["a"]), vec![], "t").unwrap();
        assert_eq!(class_histogram(&empty).unwrap(), ClassHistogram::default());

        let three =
            Dataset::new(names(&["a"]), vec![MibRecord::labeled(vec![0.0], TrafficClass::Normal); 3], "t").unwrap();
        let h = class_histogram(&three).unwrap();
        assert_eq!(h.get(TrafficClass::Normal), 3);
        assert_eq!(h.total(), 3);

        let unl = Dataset::new(names(&["a"]), vec![MibRecord::new(vec![0.0], None)], "t").unwrap();
        assert_eq!(class_histogram(&unl).unwrap_err(), CoreError::UnlabeledRecord { index: 0 });
    }

    #[test]
    fn single_class_split() {
        let ds = Dataset::new(
            names(&["a"]),
            (0..10).map(|i| MibRecord::labeled(vec![i as f64], TrafficClass::Slowpost)).collect(),
            "t",
        )
        .unwrap();
        let (tr, te) = stratified_split(&ds, 0.7, 3).unwrap();
        assert_eq!((tr.len(), te.len()), (7, 3));
        let (tr2, te2) = stratified_split(&ds, 0.7, 3).unwrap();
        assert_eq!(tr, tr2);
        assert_eq!(te, te2);
    }

    #[test]
    fn split_rejects_bad_fraction() {
        let ds = Dataset::new(names(&["a"]), vec![], "t").unwrap();
        for f in [0.0, 1.0, 1.5, -0.2, f64::NAN] {
            assert_eq!(stratified_split(&ds, f, 0).unwrap_err(), CoreError::InvalidFraction);
        }
    }

    #[test]
    fn fingerprint_depends_on_order_and_names() {
        assert_ne!(fingerprint(&["ab", "c"]), fingerprint(&["a", "bc"]));
        assert_ne!(fingerprint(&["a", "b"]), fingerprint(&["b", "a"]));
        assert_eq!(fingerprint(&["a", "b"]), fingerprint(&["a", "b"]));
    }
}
