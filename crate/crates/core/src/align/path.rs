//! Most likely monotonic segmentation of frames into label segments.
//!
//! Frames `0..T` are split into `N` contiguous, non-empty segments, segment
//! `i` belonging to label `i`. The best split maximizes the summed target
//! log-probabilities; the blank column plays no part. This is a shortest
//! path over negated scores on a DAG, solved by dynamic programming in
//! topological order.

use ndarray::{Array2, ArrayView2};

use super::{AlignError, DurationSequence, PosteriorGram};

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentPath {
    /// Label index for every frame.
    pub assignment: Vec<usize>,
    /// Total log-probability of the path.
    pub score: f64,
}

impl AlignmentPath {
    pub fn n_frames(&self) -> usize {
        self.assignment.len()
    }

    pub fn n_labels(&self) -> usize {
        self.assignment.last().map_or(0, |&i| i + 1)
    }

    pub fn validate(&self) -> Result<(), AlignError> {
        let invalid = |m: String| Err(AlignError::InvalidPath(m));
        match self.assignment.first() {
            None => return invalid("empty path".into()),
            Some(&0) => {}
            Some(&i) => return invalid(format!("path starts at phoneme {i}, not 0")),
        }
        for (t, w) in self.assignment.windows(2).enumerate() {
            if w[1] < w[0] {
                return invalid(format!("non-monotonic at frame {}", t + 1));
            }
            if w[1] > w[0] + 1 {
                return invalid(format!(
                    "phoneme index skipped at frame {} ({} -> {})",
                    t + 1,
                    w[0],
                    w[1]
                ));
            }
        }
        Ok(())
    }
}

/// Best monotonic path of `labels` through `posterior`.
pub fn best_monotonic_path(
    posterior: &PosteriorGram,
    labels: &[usize],
) -> Result<AlignmentPath, AlignError> {
    let blank = posterior.blank_id();
    if let Some(&id) = labels.iter().find(|&&l| l >= blank) {
        return Err(AlignError::LabelOutOfRange {
            id,
            n_phonemes: blank,
        });
    }
    let x = posterior.log_probs();
    let scores = Array2::from_shape_fn((posterior.n_frames(), labels.len()), |(t, i)| {
        x[[t, labels[i]]]
    });
    best_monotonic_segmentation(scores.view())
}

/// Best segmentation of a `T x N` frame-by-label score matrix.
///
/// Ties are broken towards longer earlier segments: among equal-scoring
/// paths the one with the lexicographically largest duration vector wins.
pub fn best_monotonic_segmentation(scores: ArrayView2<'_, f64>) -> Result<AlignmentPath, AlignError> {
    let (frames, labels) = scores.dim();
    if labels == 0 {
        return Err(AlignError::EmptyLabels);
    }
    if frames < labels {
        return Err(AlignError::InsufficientFrames { frames, labels });
    }
    // state (t, i) can lie on a complete path
    let feasible = |t: usize, i: usize| i <= t && frames - 1 - t >= labels - 1 - i;

    // best[t][i]: best score of frames t.. given frame t is in segment i.
    let mut best = Array2::from_elem((frames, labels), f64::NEG_INFINITY);
    best[[frames - 1, labels - 1]] = scores[[frames - 1, labels - 1]];
    for t in (0..frames - 1).rev() {
        let lo = (labels + t).saturating_sub(frames);
        let hi = t.min(labels - 1);
        for i in lo..=hi {
            let stay = feasible(t + 1, i).then(|| best[[t + 1, i]]);
            let advance = (i + 1 < labels).then(|| best[[t + 1, i + 1]]);
            let next = match (stay, advance) {
                (Some(s), Some(a)) => s.max(a),
                (Some(s), None) => s,
                (None, Some(a)) => a,
                (None, None) => unreachable!("feasible state has a successor"),
            };
            best[[t, i]] = scores[[t, i]] + next;
        }
    }

    let mut assignment = Vec::with_capacity(frames);
    let mut i = 0;
    assignment.push(0);
    for t in 0..frames - 1 {
        let stay = feasible(t + 1, i)
            && (i + 1 == labels || best[[t + 1, i]] >= best[[t + 1, i + 1]]);
        if !stay {
            i += 1;
        }
        assignment.push(i);
    }
    Ok(AlignmentPath {
        assignment,
        score: best[[0, 0]],
    })
}

/// Frames per label of a valid path.
pub fn durations_from_path(path: &AlignmentPath) -> Result<DurationSequence, AlignError> {
    path.validate()?;
    let mut durations = vec![0; path.n_labels()];
    for &i in &path.assignment {
        durations[i] += 1;
    }
    Ok(DurationSequence(durations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn path(a: &[usize]) -> AlignmentPath {
        AlignmentPath {
            assignment: a.to_vec(),
            score: 0.0,
        }
    }

    #[test]
    fn single_label_takes_all_frames() {
        let s = array![[-1.0], [-2.0], [-0.5]];
        let p = best_monotonic_segmentation(s.view()).unwrap();
        assert_eq!(p.assignment, vec![0, 0, 0]);
        assert_eq!(p.score, -1.0 + (-2.0 + -0.5));
        assert_eq!(durations_from_path(&p).unwrap().0, vec![3]);
    }

    #[test]
    fn square_is_diagonal() {
        let s = Array2::from_elem((4, 4), -1.0);
        let p = best_monotonic_segmentation(s.view()).unwrap();
        assert_eq!(p.assignment, vec![0, 1, 2, 3]);
    }

    #[test]
    fn switch_at_frame_three() {
        // label 0 likely on frames 0..3, label 1 on frames 3..5
        let s = array![
            [-0.1, -3.0],
            [-0.2, -2.5],
            [-0.3, -2.0],
            [-2.0, -0.2],
            [-3.0, -0.1]
        ];
        let p = best_monotonic_segmentation(s.view()).unwrap();
        assert_eq!(p.assignment, vec![0, 0, 0, 1, 1]);
    }

    #[test]
    fn ties_favour_earlier_labels() {
        let s = Array2::zeros((5, 2));
        let p = best_monotonic_segmentation(s.view()).unwrap();
        assert_eq!(p.assignment, vec![0, 0, 0, 0, 1]);
        let s = Array2::from_elem((5, 3), f64::NEG_INFINITY);
        let p = best_monotonic_segmentation(s.view()).unwrap();
        assert_eq!(p.assignment, vec![0, 0, 0, 1, 2]);
        assert_eq!(p.score, f64::NEG_INFINITY);
    }

    #[test]
    fn too_few_frames() {
        let s = Array2::zeros((2, 3));
        assert!(matches!(
            best_monotonic_segmentation(s.view()),
            Err(AlignError::InsufficientFrames { frames: 2, labels: 3 })
        ));
    }

    #[test]
    fn duration_counting_and_validation() {
        assert_eq!(durations_from_path(&path(&[0, 0, 1, 1, 1])).unwrap().0, vec![2, 3]);
        assert_eq!(durations_from_path(&path(&[0])).unwrap().0, vec![1]);
        let err = durations_from_path(&path(&[0, 0, 2, 2])).unwrap_err();
        assert!(err.to_string().contains("phoneme index skipped"));
        assert!(durations_from_path(&path(&[0, 1, 0])).is_err());
        assert!(durations_from_path(&path(&[1, 1])).is_err());
        assert!(durations_from_path(&path(&[])).is_err());
    }
}
