//! Caps on the number of objects an enumeration may yield.

use crate::error::BudgetExceeded;

/// Default cap on enumerated objects per call.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Iterator adapter that yields at most `cap` items, then reports
/// [`BudgetExceeded`] once if the inner iterator still has more.
#[derive(Debug, Clone)]
pub struct Budgeted<I> {
    inner: I,
    cap: usize,
    yielded: usize,
    done: bool,
}

impl<I: Iterator> Iterator for Budgeted<I> {
    type Item = Result<I::Item, BudgetExceeded>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.inner.next();
        match item {
            None => {
                self.done = true;
                None
            }
            Some(_) if self.yielded == self.cap => {
                self.done = true;
                Some(Err(BudgetExceeded { cap: self.cap }))
            }
            Some(v) => {
                self.yielded += 1;
                Some(Ok(v))
            }
        }
    }
}

pub trait WithBudget: Iterator + Sized {
    fn with_budget(self, cap: usize) -> Budgeted<Self> {
        Budgeted { inner: self, cap, yielded: 0, done: false }
    }

    /// Collects everything, or fails if there are more than `cap` items.
    fn collect_within(self, cap: usize) -> Result<Vec<Self::Item>, BudgetExceeded> {
        self.with_budget(cap).collect()
    }

    /// Counts everything, or fails if there are more than `cap` items.
    fn count_within(self, cap: usize) -> Result<usize, BudgetExceeded> {
        let mut n = 0;
        for item in self.with_budget(cap) {
            item?;
            n += 1;
        }
        Ok(n)
    }
}

impl<I: Iterator> WithBudget for I {}
