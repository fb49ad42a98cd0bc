//! Unit-capacity style max-flow (Edmonds–Karp) for the disjoint-path
//! questions in arm detection. Networks are small and rebuilt often, so the
//! representation favours cheap construction and reset.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, Default)]
pub struct FlowNetwork {
    head: Vec<u32>,
    next: Vec<u32>,
    to: Vec<u32>,
    cap: Vec<u32>,
    initial: Vec<u32>,
    // Search scratch kept between calls.
    pred: Vec<u32>,
    queue: VecDeque<u32>,
}

const END: u32 = u32::MAX;

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { head: vec![END; nodes], ..Default::default() }
    }

    /// Empties the network down to `nodes` isolated nodes, keeping the
    /// allocations for reuse.
    pub fn clear(&mut self, nodes: usize) {
        self.head.clear();
        self.head.resize(nodes, END);
        self.next.clear();
        self.to.clear();
        self.cap.clear();
        self.initial.clear();
    }

    pub fn num_nodes(&self) -> usize {
        self.head.len()
    }

    pub fn add_node(&mut self) -> u32 {
        self.head.push(END);
        (self.head.len() - 1) as u32
    }

    /// Directed arc `u → v`; the reverse residual arc is `id ^ 1`.
    pub fn add_edge(&mut self, u: u32, v: u32, cap: u32) -> u32 {
        let id = self.to.len() as u32;
        for (a, b, c) in [(u, v, cap), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(c);
            self.initial.push(c);
            self.next.push(self.head[a as usize]);
            self.head[a as usize] = self.to.len() as u32 - 1;
        }
        id
    }

    /// Restores every capacity to its value at construction.
    pub fn reset(&mut self) {
        self.cap.copy_from_slice(&self.initial);
    }

    /// Drops arcs added after the network had `arcs` arcs and `nodes` nodes.
    pub fn truncate(&mut self, nodes: usize, arcs: usize) {
        for id in (arcs..self.to.len()).rev() {
            // Arcs are prepended to their tail's list, so undoing in reverse
            // order pops them off the front.
            let tail = self.to[id ^ 1] as usize;
            if tail < self.head.len() {
                self.head[tail] = self.next[id];
            }
        }
        self.to.truncate(arcs);
        self.cap.truncate(arcs);
        self.initial.truncate(arcs);
        self.next.truncate(arcs);
        self.head.truncate(nodes);
    }

    pub fn num_arcs(&self) -> usize {
        self.to.len()
    }

    pub fn flow_on(&self, id: u32) -> u32 {
        self.initial[id as usize] - self.cap[id as usize]
    }

    /// Augments from `s` to `t` until the flow reaches `limit` or no path is
    /// left; returns the flow pushed by this call.
    pub fn max_flow(&mut self, s: u32, t: u32, limit: u32) -> u32 {
        let n = self.head.len();
        let mut pred = core::mem::take(&mut self.pred);
        let mut queue = core::mem::take(&mut self.queue);
        pred.clear();
        pred.resize(n, END);
        let mut total = 0;
        while total < limit {
            pred.iter_mut().for_each(|p| *p = END);
            queue.clear();
            queue.push_back(s);
            let mut reached = false;
            'bfs: while let Some(u) = queue.pop_front() {
                let mut a = self.head[u as usize];
                while a != END {
                    let v = self.to[a as usize];
                    if self.cap[a as usize] > 0 && v != s && pred[v as usize] == END {
                        pred[v as usize] = a;
                        if v == t {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                    a = self.next[a as usize];
                }
            }
            if !reached {
                break;
            }
            let mut push = limit - total;
            let mut v = t;
            while v != s {
                let a = pred[v as usize] as usize;
                push = push.min(self.cap[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = pred[v as usize] as usize;
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.to[a ^ 1];
            }
            total += push;
        }
        self.pred = pred;
        self.queue = queue;
        total
    }
}
