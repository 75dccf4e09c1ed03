use serde::{Deserialize, Serialize};

use crate::logmath::{log_add_exp, log_sum_exp};

/// Classes whose deterministic log-count falls below this are dropped.
pub const LOGDET_MIN_LOG_COUNT: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    LogDet,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::LogDet => "logdet",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassCount {
    Exact(u64),
    /// Natural log of a real-valued count.
    Log(f64),
}

impl ClassCount {
    pub fn log(&self) -> f64 {
        match *self {
            ClassCount::Exact(n) => (n as f64).ln(),
            ClassCount::Log(l) => l,
        }
    }

    fn merge(self, other: ClassCount) -> ClassCount {
        match (self, other) {
            (ClassCount::Exact(a), ClassCount::Exact(b)) => ClassCount::Exact(a + b),
            (a, b) => ClassCount::Log(log_add_exp(a.log(), b.log())),
        }
    }
}

/// Individuals sharing one fitness value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Class {
    pub log_fitness: f64,
    pub count: ClassCount,
    /// Generation the class entered the population.
    pub born: usize,
}

/// Population aggregated into fitness classes.
///
/// `classes` is sorted by descending log-fitness with unique keys; `log_x`
/// and `log_fitsum` are recomputed from the classes after every change.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    pub t: usize,
    pub classes: Vec<Class>,
    pub mode: Mode,
    /// `log X(t)`.
    pub log_x: f64,
    /// `log sum_i n_i F_i`.
    pub log_fitsum: f64,
    /// Log-fitness of the fittest mutant produced in generation `t`
    /// (`-inf` if none).
    pub log_w: f64,
}

impl PopulationState {
    /// One individual with log-fitness `log_f` at generation 0.
    pub fn founder(log_f: f64) -> Self {
        Self::from_classes(
            0,
            Mode::Exact,
            vec![Class {
                log_fitness: log_f,
                count: ClassCount::Exact(1),
                born: 0,
            }],
            f64::NEG_INFINITY,
        )
    }

    pub fn from_classes(t: usize, mode: Mode, classes: Vec<Class>, log_w: f64) -> Self {
        let mut state = Self {
            t,
            classes,
            mode,
            log_x: f64::NEG_INFINITY,
            log_fitsum: f64::NEG_INFINITY,
            log_w,
        };
        state.normalize();
        state
    }

    /// Sorts, merges equal fitness keys and refreshes the totals.
    pub fn normalize(&mut self) {
        self.classes
            .sort_by(|a, b| b.log_fitness.total_cmp(&a.log_fitness));
        let mut merged: Vec<Class> = Vec::with_capacity(self.classes.len());
        for c in self.classes.drain(..) {
            match merged.last_mut() {
                Some(last) if last.log_fitness == c.log_fitness => {
                    last.count = last.count.merge(c.count);
                    last.born = last.born.min(c.born);
                }
                _ => merged.push(c),
            }
        }
        self.classes = merged;
        self.log_x = log_sum_exp(self.classes.iter().map(|c| c.count.log()));
        self.log_fitsum =
            log_sum_exp(self.classes.iter().map(|c| c.count.log() + c.log_fitness));
    }

    pub fn is_extinct(&self) -> bool {
        self.classes.is_empty()
    }

    /// Converts integer counts to log-counts.
    pub fn to_logdet(&self) -> Self {
        let classes = self
            .classes
            .iter()
            .map(|c| Class {
                count: ClassCount::Log(c.count.log()),
                ..*c
            })
            .collect();
        Self::from_classes(self.t, Mode::LogDet, classes, self.log_w)
    }

    /// Age of the largest class, `None` when extinct.
    pub fn dominant_age(&self) -> Option<usize> {
        self.classes
            .iter()
            .max_by(|a, b| a.count.log().total_cmp(&b.count.log()))
            .map(|c| self.t - c.born)
    }

    pub fn total_exact(&self) -> Option<u64> {
        self.classes
            .iter()
            .map(|c| match c.count {
                ClassCount::Exact(n) => Some(n),
                ClassCount::Log(_) => None,
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(log_fitness: f64, n: u64, born: usize) -> Class {
        Class {
            log_fitness,
            count: ClassCount::Exact(n),
            born,
        }
    }

    #[test]
    fn normalize_sorts_and_merges() {
        let s = PopulationState::from_classes(
            3,
            Mode::Exact,
            vec![class(1.0, 2, 1), class(2.0, 1, 3), class(1.0, 5, 0)],
            f64::NEG_INFINITY,
        );
        assert_eq!(s.classes.len(), 2);
        assert_eq!(s.classes[0].log_fitness, 2.0);
        assert_eq!(s.classes[1].count, ClassCount::Exact(7));
        assert_eq!(s.classes[1].born, 0);
        assert!((s.log_x - 8f64.ln()).abs() < 1e-14);
        let fitsum = 7.0 * 1f64.exp() + 2f64.exp();
        assert!((s.log_fitsum - fitsum.ln()).abs() < 1e-14);
        assert_eq!(s.total_exact(), Some(8));
        assert_eq!(s.dominant_age(), Some(3));
    }

    #[test]
    fn logdet_conversion_preserves_totals() {
        let s = PopulationState::from_classes(
            1,
            Mode::Exact,
            vec![class(3.0, 10, 0), class(0.5, 4, 1)],
            0.5,
        );
        let d = s.to_logdet();
        assert_eq!(d.mode, Mode::LogDet);
        assert!((d.log_x - s.log_x).abs() < 1e-14);
        assert!((d.log_fitsum - s.log_fitsum).abs() < 1e-14);
        assert_eq!(d.total_exact(), None);
    }

    #[test]
    fn empty_is_extinct() {
        let s = PopulationState::from_classes(2, Mode::Exact, vec![], f64::NEG_INFINITY);
        assert!(s.is_extinct());
        assert_eq!(s.log_x, f64::NEG_INFINITY);
        assert_eq!(s.dominant_age(), None);
    }
}
