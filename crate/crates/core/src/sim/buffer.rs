use std::collections::VecDeque;

use crate::model::{window_of, Request};

/// Requests waiting to be presented to a window (`pending`, in time
/// order) and requests presented but left unassigned (`carried`).
#[derive(Debug, Clone)]
pub struct RequestBuffer {
    pending: VecDeque<Request>,
    carried: Vec<Request>,
}

impl RequestBuffer {
    /// Takes the whole request stream. Windows are re-derived from `delta`.
    pub fn new(mut requests: Vec<Request>, delta: f64) -> Self {
        for r in &mut requests {
            r.registered_window = window_of(r.registered_at, delta);
        }
        requests.sort_by(|a, b| {
            a.registered_at
                .total_cmp(&b.registered_at)
                .then(a.id.cmp(&b.id))
        });
        RequestBuffer {
            pending: requests.into(),
            carried: Vec::new(),
        }
    }

    /// Tasks of window `tau`: carried requests followed by the pending ones
    /// registered up to the end of the window. Returns how many are new.
    pub fn get_tasks(&mut self, tau: usize) -> (Vec<Request>, usize) {
        let mut tasks = std::mem::take(&mut self.carried);
        let before = tasks.len();
        while self
            .pending
            .front()
            .is_some_and(|r| r.registered_window <= tau)
        {
            tasks.push(self.pending.pop_front().unwrap());
        }
        let new = tasks.len() - before;
        (tasks, new)
    }

    pub fn carry(&mut self, requests: impl IntoIterator<Item = Request>) {
        self.carried.extend(requests);
    }

    pub fn pending(&self) -> usize {
        self.pending.len()
    }

    pub fn carried(&self) -> &[Request] {
        &self.carried
    }
}
