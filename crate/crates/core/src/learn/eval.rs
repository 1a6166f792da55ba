use serde::Serialize;

use crate::error::{Error, Result};

use super::model::{AssociativeMemory, Labeled};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub accuracy: f64,
    pub total: usize,
    pub correct: usize,
    /// Predictions that were resolved by the lowest-label tie rule.
    pub ties: usize,
    /// Class labels in model order, indexing both confusion axes.
    pub labels: Vec<String>,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
}

pub fn evaluate(am: &AssociativeMemory, test: &[Labeled]) -> Result<Evaluation> {
    if test.is_empty() {
        return Err(Error::EmptyInput("test set"));
    }
    let k = am.class_count();
    let mut confusion = vec![vec![0usize; k]; k];
    let (mut correct, mut ties) = (0, 0);
    for e in test {
        let truth = am.index_of(&e.label)?;
        let p = am.predict_hv(&e.hv)?;
        confusion[truth][p.index] += 1;
        correct += usize::from(truth == p.index);
        ties += usize::from(p.tie);
    }
    Ok(Evaluation {
        accuracy: correct as f64 / test.len() as f64,
        total: test.len(),
        correct,
        ties,
        labels: am.labels().map(str::to_owned).collect(),
        confusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{BinaryHv, HvSpace, TiePolicy};
    use crate::learn::{train_single_pass, ClassVector, ModelKind};

    #[test]
    fn class_vectors_classify_perfectly() {
        let s = HvSpace::new(1000, 1).unwrap();
        let data: Vec<_> = (0..5).map(|i| Labeled::new(format!("c{i}"), s.random_hv(i))).collect();
        let am = train_single_pass(&data, ModelKind::Binary, TiePolicy::default()).unwrap();
        let test: Vec<_> = am
            .classes()
            .iter()
            .map(|c| match &c.vector {
                ClassVector::Binary(hv) => Labeled::new(c.label.clone(), hv.clone()),
                _ => unreachable!(),
            })
            .collect();
        let ev = evaluate(&am, &test).unwrap();
        assert_eq!((ev.accuracy, ev.ties), (1.0, 0));
        assert!(evaluate(&am, &[]).is_err());
        assert!(evaluate(&am, &[Labeled::new("zz", s.random_hv(0))]).is_err());
    }

    #[test]
    fn relabeling_permutes_the_confusion_matrix() {
        let s = HvSpace::new(500, 2).unwrap();
        let data: Vec<_> = (0..3).map(|i| Labeled::new(format!("c{i}"), s.random_hv(i))).collect();
        let am = train_single_pass(&data, ModelKind::Binary, TiePolicy::default()).unwrap();
        let test: Vec<_> = (0..60u64)
            .map(|i| {
                // mostly near the class, some far enough to be misread
                let c = (i % 3) as usize;
                let mut hv = data[c].hv.clone();
                let flips = if i % 7 == 0 { 400 } else { 100 };
                let noise = s.random_hv(50 + i);
                for j in 0..flips {
                    hv.set(j, noise.get(j));
                }
                Labeled::new(format!("c{c}"), hv)
            })
            .collect();
        let base = evaluate(&am, &test).unwrap();
        let rotate = |l: &str| format!("c{}", (l[1..].parse::<usize>().unwrap() + 1) % 3);
        let relabeled: Vec<_> = test.iter().map(|e| Labeled::new(rotate(&e.label), e.hv.clone())).collect();
        let ev = evaluate(&am, &relabeled).unwrap();
        for t in 0..3 {
            for p in 0..3 {
                assert_eq!(ev.confusion[(t + 1) % 3][p], base.confusion[t][p]);
            }
            assert_eq!(ev.confusion[t].iter().sum::<usize>(), 20);
        }
        // correct now means "predicted the next class" under the old labels
        let shifted: usize = (0..3).map(|t| base.confusion[t][(t + 1) % 3]).sum();
        assert_eq!(ev.correct, shifted);
    }

    #[test]
    fn orthogonal_queries_are_counted_as_ties() {
        let zero = BinaryHv::zeros(64);
        let (mut a, mut b) = (zero.clone(), zero.clone());
        a.flip(0);
        b.flip(1);
        let am = train_single_pass(&[Labeled::new("a", a), Labeled::new("b", b)], ModelKind::Binary, TiePolicy::default()).unwrap();
        let ev = evaluate(&am, &[Labeled::new("b", zero.clone()), Labeled::new("a", zero)]).unwrap();
        assert_eq!((ev.ties, ev.correct), (2, 1));
        assert_eq!(ev.confusion, vec![vec![1, 0], vec![1, 0]]);
    }
}
