//! Domain types shared by every other module: the tabulated loss problem,
//! the hypothesis table, version spaces, mixtures and thresholded streams.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Finite instance, label and prediction spaces with a bounded loss matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    instances: Vec<String>,
    labels: Vec<String>,
    predictions: Vec<String>,
    loss: Vec<Vec<Rational>>,
    bound: Rational,
    declared_bound: Rational,
}

impl Problem {
    /// Validates the loss table and tightens `c` to the largest entry.
    /// The declared bound is kept for reporting.
    pub fn new(
        instances: Vec<String>,
        labels: Vec<String>,
        predictions: Vec<String>,
        loss: Vec<Vec<Rational>>,
        declared_bound: Rational,
    ) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::Empty("instance space"));
        }
        if labels.is_empty() {
            return Err(Error::Empty("label space"));
        }
        if predictions.is_empty() {
            return Err(Error::Empty("prediction space"));
        }
        if loss.len() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "loss has {} rows but there are {} labels",
                loss.len(),
                labels.len()
            )));
        }
        let mut max = Rational::zero();
        for (y, row) in loss.iter().enumerate() {
            if row.len() != predictions.len() {
                return Err(Error::DimensionMismatch(format!(
                    "loss row {y} has {} entries but there are {} predictions",
                    row.len(),
                    predictions.len()
                )));
            }
            for (z, v) in row.iter().enumerate() {
                if v.is_negative() {
                    return Err(Error::NegativeLoss {
                        label: y,
                        prediction: z,
                    });
                }
                if *v > declared_bound {
                    return Err(Error::LossExceedsBound {
                        label: y,
                        prediction: z,
                        bound: rational::format(&declared_bound),
                    });
                }
                if *v > max {
                    max = v.clone();
                }
            }
        }
        Ok(Problem {
            instances,
            labels,
            predictions,
            loss,
            bound: max,
            declared_bound,
        })
    }

    pub fn num_instances(&self) -> usize {
        self.instances.len()
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn num_predictions(&self) -> usize {
        self.predictions.len()
    }

    pub fn instances(&self) -> &[String] {
        &self.instances
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn predictions(&self) -> &[String] {
        &self.predictions
    }

    /// ℓ(y, z).
    pub fn loss(&self, label: usize, prediction: usize) -> &Rational {
        &self.loss[label][prediction]
    }

    pub fn loss_row(&self, label: usize) -> &[Rational] {
        &self.loss[label]
    }

    pub fn loss_matrix(&self) -> &[Vec<Rational>] {
        &self.loss
    }

    /// Tightened bound c = max ℓ(y, z).
    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn declared_bound(&self) -> &Rational {
        &self.declared_bound
    }

    /// Distinct loss values, ascending.
    pub fn loss_values(&self) -> Vec<Rational> {
        let mut vals: Vec<Rational> = self.loss.iter().flatten().cloned().collect();
        vals.sort();
        vals.dedup();
        vals
    }

    pub fn is_zero_one(&self) -> bool {
        self.loss
            .iter()
            .flatten()
            .all(|v| v.is_zero() || v.is_one())
    }
}

/// A finite hypothesis class as an |H| × |X| table of prediction indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisClass {
    table: Vec<Vec<usize>>,
}

impl HypothesisClass {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(first) = table.first() {
            if let Some((i, row)) = table.iter().enumerate().find(|(_, r)| r.len() != first.len()) {
                return Err(Error::DimensionMismatch(format!(
                    "hypothesis {i} has {} entries, hypothesis 0 has {}",
                    row.len(),
                    first.len()
                )));
            }
        }
        for second in 0..table.len() {
            if let Some(first) = (0..second).find(|&f| table[f] == table[second]) {
                return Err(Error::DuplicateHypothesis { first, second });
            }
        }
        Ok(HypothesisClass { table })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// h(x) as a prediction index.
    pub fn predict(&self, hypothesis: usize, instance: usize) -> usize {
        self.table[hypothesis][instance]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn full_space(&self) -> VersionSpace {
        VersionSpace::full(self.len())
    }

    /// Whether every hypothesis ignores the instance.
    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|row| row.windows(2).all(|w| w[0] == w[1]))
    }
}

/// A validated (problem, class) pair. Both halves are immutable and shared.
#[derive(Debug, Clone)]
pub struct Task {
    pub problem: Arc<Problem>,
    pub class: Arc<HypothesisClass>,
}

/// Checks that the class is a nonempty table over the problem's spaces.
pub fn validate_problem(problem: Problem, class: HypothesisClass) -> Result<Task> {
    if class.is_empty() {
        return Err(Error::Empty("hypothesis class"));
    }
    for (h, row) in class.rows().iter().enumerate() {
        if row.len() != problem.num_instances() {
            return Err(Error::DimensionMismatch(format!(
                "hypothesis {h} has {} entries but there are {} instances",
                row.len(),
                problem.num_instances()
            )));
        }
        if let Some(&z) = row.iter().find(|&&z| z >= problem.num_predictions()) {
            return Err(Error::IndexOutOfRange(format!(
                "hypothesis {h} predicts {z}, only {} predictions",
                problem.num_predictions()
            )));
        }
    }
    Ok(Task {
        problem: Arc::new(problem),
        class: Arc::new(class),
    })
}

impl Task {
    pub fn full_space(&self) -> VersionSpace {
        self.class.full_space()
    }

    /// ℓ(y, h(x)).
    pub fn hypothesis_loss(&self, hypothesis: usize, instance: usize, label: usize) -> &Rational {
        self.problem
            .loss(label, self.class.predict(hypothesis, instance))
    }

    pub fn restrict(&self, space: &VersionSpace, instance: usize, cand: &Candidate) -> VersionSpace {
        restrict(&self.problem, &self.class, space, instance, cand)
    }

    /// The same problem with only the listed hypotheses, in that order.
    pub fn restrict_class(&self, hypotheses: &[usize]) -> Result<Task> {
        let rows = hypotheses
            .iter()
            .map(|&h| {
                self.class
                    .rows()
                    .get(h)
                    .cloned()
                    .ok_or_else(|| Error::IndexOutOfRange(format!("hypothesis {h}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let class = HypothesisClass::new(rows)?;
        if class.is_empty() {
            return Err(Error::Empty("hypothesis class"));
        }
        Ok(Task {
            problem: Arc::clone(&self.problem),
            class: Arc::new(class),
        })
    }

    pub fn check_instance(&self, x: usize) -> Result<()> {
        if x < self.problem.num_instances() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("instance {x}")))
        }
    }

    pub fn check_label(&self, y: usize) -> Result<()> {
        if y < self.problem.num_labels() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("label {y}")))
        }
    }
}

/// A subset of hypothesis indices stored as a fixed-width bitset, so that
/// equal subsets have equal (and equally hashed) representations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VersionSpace {
    words: Box<[u64]>,
}

impl VersionSpace {
    fn words_for(universe: usize) -> usize {
        universe.div_ceil(64).max(1)
    }

    pub fn empty(universe: usize) -> Self {
        VersionSpace {
            words: vec![0; Self::words_for(universe)].into_boxed_slice(),
        }
    }

    pub fn full(universe: usize) -> Self {
        Self::from_indices(universe, 0..universe)
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::empty(universe);
        for i in indices {
            assert!(i < universe, "hypothesis index {i} out of range {universe}");
            v.words[i / 64] |= 1 << (i % 64);
        }
        v
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &VersionSpace) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| wi * 64 + b)
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        let mut out = VersionSpace {
            words: vec![0; self.words.len()].into_boxed_slice(),
        };
        for i in self.iter() {
            if keep(i) {
                out.words[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }
}

impl fmt::Debug for VersionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A probability vector over predictions with exact rational weights.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mixture {
    weights: Vec<Rational>,
}

impl Mixture {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("mixture"));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidParameter("mixture has a negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidParameter(format!(
                "mixture weights sum to {}",
                rational::format(&total)
            )));
        }
        Ok(Mixture { weights })
    }

    pub fn dirac(size: usize, at: usize) -> Self {
        let mut weights = vec![Rational::zero(); size];
        weights[at] = Rational::one();
        Mixture { weights }
    }

    pub fn uniform(size: usize) -> Self {
        let w = rational::ratio(1, size as i64);
        Mixture {
            weights: vec![w; size],
        }
    }

    /// Normalizes nonnegative weights that are not all zero.
    pub fn normalized(weights: Vec<Rational>) -> Result<Self> {
        let total: Rational = weights.iter().sum();
        if total.is_zero() || weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidParameter("cannot normalize weights".into()));
        }
        Ok(Mixture {
            weights: weights.into_iter().map(|w| w / &total).collect(),
        })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// ⟨row, μ⟩.
    pub fn dot(&self, row: &[Rational]) -> Rational {
        self.weights
            .iter()
            .zip(row)
            .filter(|(w, _)| !w.is_zero())
            .map(|(w, r)| w * r)
            .sum()
    }

    /// λ·self + (1−λ)·other.
    pub fn blend(&self, other: &Mixture, lambda: &Rational) -> Mixture {
        let rest = Rational::one() - lambda;
        Mixture {
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a * lambda + b * &rest)
                .collect(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, _)| i)
    }
}

impl fmt::Display for Mixture {
    /// Semicolon-joined canonical rationals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(rational::format).collect();
        f.write_str(&parts.join(";"))
    }
}

impl fmt::Debug for Mixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mixture({self})")
    }
}

/// A (label, threshold) pair with 0 ≤ ε ≤ c.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Candidate {
    pub label: usize,
    pub threshold: Rational,
}

impl Candidate {
    pub fn new(problem: &Problem, label: usize, threshold: Rational) -> Result<Self> {
        if label >= problem.num_labels() {
            return Err(Error::IndexOutOfRange(format!("label {label}")));
        }
        if threshold.is_negative() || threshold > *problem.bound() {
            return Err(Error::InvalidParameter(format!(
                "threshold {} outside [0, {}]",
                rational::format(&threshold),
                rational::format(problem.bound())
            )));
        }
        Ok(Candidate { label, threshold })
    }
}

/// E_{z∼μ}[ℓ(y, z)].
pub fn expected_loss(problem: &Problem, mixture: &Mixture, label: usize) -> Rational {
    mixture.dot(problem.loss_row(label))
}

/// {h ∈ space : ℓ(y, h(x)) ≤ ε}.
pub fn restrict(
    problem: &Problem,
    class: &HypothesisClass,
    space: &VersionSpace,
    instance: usize,
    cand: &Candidate,
) -> VersionSpace {
    space.filter(|h| *problem.loss(cand.label, class.predict(h, instance)) <= cand.threshold)
}

/// One round of a stream: instance, label and an optional threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdedExample {
    pub instance: usize,
    pub label: usize,
    pub eps: Option<Rational>,
}

impl ThresholdedExample {
    pub fn labeled(instance: usize, label: usize) -> Self {
        ThresholdedExample {
            instance,
            label,
            eps: None,
        }
    }

    pub fn thresholded(instance: usize, label: usize, eps: Rational) -> Self {
        ThresholdedExample {
            instance,
            label,
            eps: Some(eps),
        }
    }
}

/// A finite stream. Thresholds are present on every element or on none.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Stream {
    examples: Vec<ThresholdedExample>,
}

impl Stream {
    pub fn new(examples: Vec<ThresholdedExample>) -> Result<Self> {
        if let Some(first) = examples.first() {
            let thresholded = first.eps.is_some();
            if let Some(i) = examples.iter().position(|e| e.eps.is_some() != thresholded) {
                return Err(Error::schema(
                    format!("/stream/{i}/eps"),
                    "eps must be present on every element or on none",
                ));
            }
            if let Some(i) = examples
                .iter()
                .position(|e| e.eps.as_ref().is_some_and(|v| v.is_negative()))
            {
                return Err(Error::schema(format!("/stream/{i}/eps"), "negative threshold"));
            }
        }
        Ok(Stream { examples })
    }

    pub fn examples(&self) -> &[ThresholdedExample] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn is_thresholded(&self) -> bool {
        self.examples.first().is_some_and(|e| e.eps.is_some())
    }

    pub fn validate_for(&self, problem: &Problem) -> Result<()> {
        for (i, e) in self.examples.iter().enumerate() {
            if e.instance >= problem.num_instances() {
                return Err(Error::schema(format!("/stream/{i}/x"), "instance index out of range"));
            }
            if e.label >= problem.num_labels() {
                return Err(Error::schema(format!("/stream/{i}/y"), "label index out of range"));
            }
        }
        Ok(())
    }

    /// Some hypothesis suffers loss ≤ ε_t on every round.
    pub fn is_realizable(&self, task: &Task) -> bool {
        (0..task.class.len()).any(|h| {
            self.examples.iter().all(|e| match &e.eps {
                Some(eps) => task.hypothesis_loss(h, e.instance, e.label) <= eps,
                None => task.hypothesis_loss(h, e.instance, e.label).is_zero(),
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn zero_one(n: usize) -> Vec<Vec<Rational>> {
        (0..n)
            .map(|y| (0..n).map(|z| if y == z { int(0) } else { int(1) }).collect())
            .collect()
    }

    fn p1() -> Task {
        let problem = Problem::new(names("x", 1), names("y", 2), names("z", 2), zero_one(2), int(1)).unwrap();
        let class = HypothesisClass::new(vec![vec![0], vec![1]]).unwrap();
        validate_problem(problem, class).unwrap()
    }

    #[test]
    fn accepts_p1() {
        let t = p1();
        assert_eq!(*t.problem.bound(), int(1));
        assert_eq!(t.class.len(), 2);
    }

    #[test]
    fn rejects_negative_loss() {
        let mut loss = zero_one(2);
        loss[0][1] = ratio(-1, 2);
        let err = Problem::new(names("x", 1), names("y", 2), names("z", 2), loss, int(1)).unwrap_err();
        assert_eq!(err, Error::NegativeLoss { label: 0, prediction: 1 });
        assert!(err.to_string().contains("negative loss"));
    }

    #[test]
    fn rejects_loss_over_bound() {
        let err = Problem::new(names("x", 1), names("y", 2), names("z", 2), zero_one(2), ratio(1, 2)).unwrap_err();
        assert!(matches!(err, Error::LossExceedsBound { .. }));
    }

    #[test]
    fn tightens_declared_bound() {
        let p = Problem::new(names("x", 1), names("y", 2), names("z", 2), zero_one(2), int(3)).unwrap();
        assert_eq!(*p.bound(), int(1));
        assert_eq!(*p.declared_bound(), int(3));
    }

    #[test]
    fn rejects_duplicate_hypotheses() {
        let err = HypothesisClass::new(vec![vec![0], vec![1], vec![0]]).unwrap_err();
        assert_eq!(err, Error::DuplicateHypothesis { first: 0, second: 2 });
        assert!(err.to_string().contains("duplicate hypothesis"));
    }

    #[test]
    fn rejects_shape_errors() {
        let p = Problem::new(names("x", 2), names("y", 2), names("z", 2), zero_one(2), int(1)).unwrap();
        let c = HypothesisClass::new(vec![vec![0]]).unwrap();
        assert!(matches!(validate_problem(p.clone(), c), Err(Error::DimensionMismatch(_))));
        let c = HypothesisClass::new(vec![vec![0, 2]]).unwrap();
        assert!(matches!(validate_problem(p, c), Err(Error::IndexOutOfRange(_))));
        assert!(Problem::new(vec![], names("y", 2), names("z", 2), zero_one(2), int(1)).is_err());
    }

    #[test]
    fn expected_loss_examples() {
        let t = p1();
        let half = Mixture::uniform(2);
        assert_eq!(expected_loss(&t.problem, &half, 0), ratio(1, 2));
        assert_eq!(expected_loss(&t.problem, &Mixture::dirac(2, 0), 0), int(0));
        let m = Mixture::new(vec![ratio(1, 4), ratio(3, 4)]).unwrap();
        assert_eq!(expected_loss(&t.problem, &m, 0), ratio(3, 4));
    }

    #[test]
    fn restrict_examples() {
        let t = p1();
        let v = t.full_space();
        let c = |y, e| Candidate::new(&t.problem, y, e).unwrap();
        assert_eq!(t.restrict(&v, 0, &c(0, int(0))).to_vec(), vec![0]);
        assert_eq!(t.restrict(&v, 0, &c(0, int(1))), v);
        let only1 = VersionSpace::from_indices(2, [1]);
        assert!(t.restrict(&only1, 0, &c(0, ratio(1, 2))).is_empty());
    }

    #[test]
    fn candidate_threshold_range() {
        let t = p1();
        assert!(Candidate::new(&t.problem, 0, ratio(-1, 2)).is_err());
        assert!(Candidate::new(&t.problem, 0, int(2)).is_err());
        assert!(Candidate::new(&t.problem, 2, int(0)).is_err());
    }

    #[test]
    fn mixture_validation() {
        assert!(Mixture::new(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(Mixture::new(vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert_eq!(Mixture::uniform(3).to_string(), "1/3;1/3;1/3");
    }

    #[test]
    fn stream_eps_all_or_none() {
        let err = Stream::new(vec![
            ThresholdedExample::thresholded(0, 0, int(0)),
            ThresholdedExample::labeled(0, 1),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::Schema { ref path, .. } if path == "/stream/1/eps"));
    }

    #[test]
    fn version_space_is_canonical() {
        let a = VersionSpace::from_indices(70, [65, 3, 3]);
        let b = VersionSpace::from_indices(70, [3, 65]);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert_eq!(a.to_vec(), vec![3, 65]);
        assert!(a.is_subset(&VersionSpace::full(70)));
    }

    fn small_task() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Vec<usize>>)> {
        (2usize..4, 2usize..4, 1usize..3).prop_flat_map(|(ny, nz, nx)| {
            (
                proptest::collection::vec(proptest::collection::vec(0i64..5, nz), ny),
                proptest::collection::vec(proptest::collection::vec(0..nz, nx), 1..6),
            )
        })
    }

    proptest! {
        #[test]
        fn restrict_monotone_in_eps((loss, rows) in small_task(), a in 0i64..5, b in 0i64..5) {
            let labels = loss.len();
            let nz = loss[0].len();
            let nx = rows[0].len();
            let mut rows = rows;
            rows.sort();
            rows.dedup();
            let table: Vec<Vec<Rational>> = loss.iter().map(|r| r.iter().map(|&v| ratio(v, 4)).collect()).collect();
            let p = Problem::new(names("x", nx), names("y", labels), names("z", nz), table, int(1)).unwrap();
            let t = validate_problem(p, HypothesisClass::new(rows).unwrap()).unwrap();
            let c = t.problem.bound().clone();
            let (lo, hi) = (a.min(b), a.max(b));
            let lo = (ratio(lo, 4)).min(c.clone());
            let hi = (ratio(hi, 4)).min(c.clone());
            let v = t.full_space();
            for y in 0..labels {
                for x in 0..nx {
                    let small = t.restrict(&v, x, &Candidate::new(&t.problem, y, lo.clone()).unwrap());
                    let large = t.restrict(&v, x, &Candidate::new(&t.problem, y, hi.clone()).unwrap());
                    prop_assert!(small.is_subset(&large));
                    let all = t.restrict(&v, x, &Candidate::new(&t.problem, y, c.clone()).unwrap());
                    prop_assert_eq!(&all, &v);
                }
            }
        }

        #[test]
        fn expected_loss_is_linear(w1 in proptest::collection::vec(1i64..10, 3), w2 in proptest::collection::vec(1i64..10, 3), l in 0i64..=8, row in proptest::collection::vec(0i64..9, 3)) {
            let m1 = Mixture::normalized(w1.iter().map(|&w| int(w)).collect()).unwrap();
            let m2 = Mixture::normalized(w2.iter().map(|&w| int(w)).collect()).unwrap();
            let lambda = ratio(l, 8);
            let table = vec![row.iter().map(|&v| ratio(v, 3)).collect::<Vec<_>>()];
            let p = Problem::new(names("x", 1), names("y", 1), names("z", 3), table, int(3)).unwrap();
            let blended = m1.blend(&m2, &lambda);
            let lhs = expected_loss(&p, &blended, 0);
            let rhs = &lambda * expected_loss(&p, &m1, 0) + (int(1) - &lambda) * expected_loss(&p, &m2, 0);
            prop_assert_eq!(lhs, rhs);
            for z in 0..3 {
                prop_assert_eq!(expected_loss(&p, &Mixture::dirac(3, z), 0), p.loss(0, z).clone());
            }
        }
    }

}
