// SPDX-License-Identifier: Apache-2.0

//! Value-level runs of a code: sample `(A, K)`, fail and repair nodes,
//! eavesdrop, count disk reads and reconstruct the file.
//!
//! Node numbers are 0-based in the API. Events and transcripts serialize
//! them 1-based.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{Attack, LinearDssCode};
use crate::matrix::FieldMatrix;
use crate::verifier::{type2_rows, WiretapView};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("node {0} is out of range")]
    BadNode(usize),
    #[error("reconstruction needs exactly {k} nodes, got {got}")]
    SubsetSize { k: usize, got: usize },
    #[error("attack kind {0} has no wiretap view")]
    NoView(Attack),
    #[error("internal fault: {0}")]
    Internal(String),
    #[error("event log line {line}: {reason}")]
    Replay { line: usize, reason: String },
}

/// One log entry. Serialized as a single JSON line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    /// Initial state. `seed` is absent when `(A, K)` was given explicitly.
    Init {
        seed: Option<u64>,
        file: Vec<u32>,
        keys: Vec<u32>,
    },
    Store {
        node: usize,
        labels: Vec<String>,
        values: Vec<u32>,
    },
    Fail {
        node: usize,
    },
    Transfer {
        node: usize,
        to: usize,
        labels: Vec<String>,
        values: Vec<u32>,
        reads: usize,
    },
    Repair {
        node: usize,
        labels: Vec<String>,
        values: Vec<u32>,
        exact: bool,
    },
    Reconstruct {
        nodes: Vec<usize>,
        values: Vec<u32>,
    },
    Wiretap {
        attack: Attack,
        nodes: Vec<usize>,
        values: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferRecord {
    /// 1-based helper node.
    pub helper: usize,
    pub values: Vec<u32>,
    pub reads: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairTranscript {
    /// 1-based repaired node.
    pub node: usize,
    pub transfers: Vec<TransferRecord>,
    pub restored: Vec<u32>,
    pub exact: bool,
}

impl RepairTranscript {
    pub fn symbols_transferred(&self) -> usize {
        self.transfers.iter().map(|t| t.values.len()).sum()
    }

    pub fn disk_reads(&self) -> usize {
        self.transfers.iter().map(|t| t.reads).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryTranscript {
    pub attack: Attack,
    /// 0-based nodes.
    pub nodes: Vec<usize>,
    pub values: Vec<u32>,
    /// Row `r` produced `values[r]`.
    pub functionals: FieldMatrix,
    /// Set when the wiretapped set does not have the declared size `l`.
    pub exploratory: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiskReads {
    pub per_node: Vec<u64>,
    pub total: u64,
}

/// A running system. Single owner; the code is shared read-only.
#[derive(Debug, Clone)]
pub struct SimState<'a> {
    code: &'a LinearDssCode,
    seed: Option<u64>,
    file: Vec<u32>,
    keys: Vec<u32>,
    contents: Vec<Vec<u32>>,
    log: Vec<Event>,
    repairs: Vec<RepairTranscript>,
    reads: Vec<u64>,
}

impl<'a> SimState<'a> {
    /// Samples `A` then `K` uniformly from a ChaCha8 stream seeded by `seed`.
    pub fn init(code: &'a LinearDssCode, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = code.field.order();
        let p = &code.params;
        let file = (0..p.file_symbols).map(|_| rng.gen_range(0..q)).collect();
        let keys = (0..p.key_symbols).map(|_| rng.gen_range(0..q)).collect();
        Self::start(code, Some(seed), file, keys).expect("sampled labels are in range")
    }

    /// Starts from a given `(A, K)`.
    pub fn with_values(
        code: &'a LinearDssCode,
        file: Vec<u32>,
        keys: Vec<u32>,
    ) -> Result<Self, SimError> {
        Self::start(code, None, file, keys)
    }

    fn start(
        code: &'a LinearDssCode,
        seed: Option<u64>,
        file: Vec<u32>,
        keys: Vec<u32>,
    ) -> Result<Self, SimError> {
        let q = code.field.order();
        if let Some(&bad) = file.iter().chain(&keys).find(|&&x| x >= q) {
            return Err(SimError::Internal(format!("label {bad} is not in F_{q}")));
        }
        let contents = code
            .encode(&file, &keys)
            .map_err(|e| SimError::Internal(e.to_string()))?;
        let mut log = vec![Event::Init {
            seed,
            file: file.clone(),
            keys: keys.clone(),
        }];
        for (i, w) in contents.iter().enumerate() {
            log.push(Event::Store {
                node: i + 1,
                labels: stored_labels(i, w.len()),
                values: w.clone(),
            });
        }
        Ok(Self {
            code,
            seed,
            file,
            keys,
            reads: vec![0; code.n()],
            contents,
            log,
            repairs: Vec::new(),
        })
    }

    pub fn code(&self) -> &LinearDssCode {
        self.code
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn file(&self) -> &[u32] {
        &self.file
    }

    pub fn keys(&self) -> &[u32] {
        &self.keys
    }

    pub fn contents(&self, node: usize) -> &[u32] {
        &self.contents[node]
    }

    pub fn log(&self) -> &[Event] {
        &self.log
    }

    pub fn repairs(&self) -> &[RepairTranscript] {
        &self.repairs
    }

    /// `(A, K)` as one vector.
    pub fn state_vector(&self) -> Vec<u32> {
        self.file.iter().chain(&self.keys).copied().collect()
    }

    fn check_node(&self, node: usize) -> Result<(), SimError> {
        if node >= self.code.n() {
            return Err(SimError::BadNode(node));
        }
        Ok(())
    }

    /// Erases node `j`, collects one transfer from each helper and decodes.
    pub fn fail_and_repair(&mut self, j: usize) -> Result<RepairTranscript, SimError> {
        self.check_node(j)?;
        let code = self.code;
        let before = std::mem::take(&mut self.contents[j]);
        self.log.push(Event::Fail { node: j + 1 });

        let nr = &code.repair.nodes[j];
        let mut download = Vec::with_capacity(code.params.d * code.params.beta);
        let mut transfers = Vec::with_capacity(nr.helpers.len());
        for (pos, &h) in nr.helpers.iter().enumerate() {
            let values = nr.transfers[pos]
                .mul_vec(&self.contents[h])
                .map_err(|e| SimError::Internal(e.to_string()))?;
            let reads = code.transfer_reads(j, pos);
            self.reads[h] += reads as u64;
            self.log.push(Event::Transfer {
                node: h + 1,
                to: j + 1,
                labels: (1..=values.len())
                    .map(|r| format!("S{}>{}.{r}", h + 1, j + 1))
                    .collect(),
                values: values.clone(),
                reads,
            });
            download.extend_from_slice(&values);
            transfers.push(TransferRecord {
                helper: h + 1,
                values,
                reads,
            });
        }
        let restored = nr
            .decoder
            .mul_vec(&download)
            .map_err(|e| SimError::Internal(e.to_string()))?;
        let exact = restored == before;
        self.log.push(Event::Repair {
            node: j + 1,
            labels: stored_labels(j, restored.len()),
            values: restored.clone(),
            exact,
        });
        self.contents[j] = restored.clone();
        let transcript = RepairTranscript {
            node: j + 1,
            transfers,
            restored,
            exact,
        };
        self.repairs.push(transcript.clone());
        Ok(transcript)
    }

    /// Decodes `A` from the contents of exactly `k` nodes.
    pub fn reconstruct(&mut self, nodes: &[usize]) -> Result<Vec<u32>, SimError> {
        let k = self.code.params.k;
        if nodes.len() != k {
            return Err(SimError::SubsetSize {
                k,
                got: nodes.len(),
            });
        }
        for &i in nodes {
            self.check_node(i)?;
        }
        let g = self.code.stored_functionals(nodes);
        let decoder = g
            .solve_left(&self.code.file_functionals())
            .map_err(|e| SimError::Internal(e.to_string()))?
            .ok_or_else(|| SimError::Internal("no decoder for this subset".into()))?;
        let observed: Vec<u32> = nodes
            .iter()
            .flat_map(|&i| self.contents[i].iter().copied())
            .collect();
        let values = decoder
            .mul_vec(&observed)
            .map_err(|e| SimError::Internal(e.to_string()))?;
        self.log.push(Event::Reconstruct {
            nodes: nodes.iter().map(|i| i + 1).collect(),
            values: values.clone(),
        });
        Ok(values)
    }

    /// What an eavesdropper on `nodes` collects. Type-2 uses the first
    /// logged repair of each node and triggers one if there is none.
    pub fn wiretap(
        &mut self,
        attack: Attack,
        nodes: &[usize],
    ) -> Result<AdversaryTranscript, SimError> {
        for &i in nodes {
            self.check_node(i)?;
        }
        let view =
            WiretapView::new(self.code, attack, nodes).map_err(|_| SimError::NoView(attack))?;
        let values = match attack {
            Attack::Type1 => nodes
                .iter()
                .flat_map(|&i| self.contents[i].iter().copied())
                .collect::<Vec<u32>>(),
            Attack::Type2 => {
                for &j in nodes {
                    if self.first_repair(j).is_none() {
                        self.fail_and_repair(j)?;
                    }
                }
                type2_rows(self.code, nodes)
                    .iter()
                    .map(|r| {
                        let rep = self.first_repair(r.node).expect("repair logged above");
                        rep.transfers[r.helper_pos].values[r.row_index]
                    })
                    .collect()
            }
            Attack::None => return Err(SimError::NoView(attack)),
        };
        self.log.push(Event::Wiretap {
            attack,
            nodes: nodes.iter().map(|i| i + 1).collect(),
            values: values.clone(),
        });
        Ok(AdversaryTranscript {
            attack,
            nodes: nodes.to_vec(),
            values,
            functionals: view.functionals,
            exploratory: nodes.len() != self.code.params.l,
        })
    }

    fn first_repair(&self, node: usize) -> Option<&RepairTranscript> {
        self.repairs.iter().find(|r| r.node == node + 1)
    }

    pub fn disk_reads(&self) -> DiskReads {
        DiskReads {
            per_node: self.reads.clone(),
            total: self.reads.iter().sum(),
        }
    }

    /// The event log as JSON lines, newline-terminated.
    pub fn export_log(&self) -> String {
        let mut out = String::new();
        for e in &self.log {
            out.push_str(&serde_json::to_string(e).expect("events serialize"));
            out.push('\n');
        }
        out
    }
}

fn stored_labels(node: usize, alpha: usize) -> Vec<String> {
    (1..=alpha).map(|r| format!("W{}.{r}", node + 1)).collect()
}

/// Re-executes a log against `code` and checks that every event comes
/// out identical.
pub fn replay<'a>(code: &'a LinearDssCode, jsonl: &str) -> Result<SimState<'a>, SimError> {
    let mut events = Vec::new();
    for (idx, line) in jsonl
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let e: Event = serde_json::from_str(line).map_err(|err| SimError::Replay {
            line: idx + 1,
            reason: err.to_string(),
        })?;
        events.push((idx + 1, e));
    }
    let mut iter = events.iter();
    let mut state = match iter.next() {
        Some((_, Event::Init { seed, file, keys })) => {
            let s = match seed {
                Some(seed) => SimState::init(code, *seed),
                None => SimState::with_values(code, file.clone(), keys.clone())?,
            };
            if s.file != *file || s.keys != *keys {
                return Err(SimError::Replay {
                    line: 1,
                    reason: "seed does not reproduce the logged file and keys".into(),
                });
            }
            s
        }
        _ => {
            return Err(SimError::Replay {
                line: 1,
                reason: "log must start with an init event".into(),
            })
        }
    };
    let node = |line: usize, n: usize| {
        n.checked_sub(1).ok_or(SimError::Replay {
            line,
            reason: "nodes are numbered from 1".into(),
        })
    };
    for (line, e) in iter {
        match e {
            Event::Fail { node: n } => {
                state.fail_and_repair(node(*line, *n)?)?;
            }
            Event::Reconstruct { nodes, .. } => {
                let s = nodes
                    .iter()
                    .map(|&n| node(*line, n))
                    .collect::<Result<Vec<_>, _>>()?;
                state.reconstruct(&s)?;
            }
            Event::Wiretap { attack, nodes, .. } => {
                let s = nodes
                    .iter()
                    .map(|&n| node(*line, n))
                    .collect::<Result<Vec<_>, _>>()?;
                state.wiretap(*attack, &s)?;
            }
            // produced by the events above
            Event::Init { .. }
            | Event::Store { .. }
            | Event::Transfer { .. }
            | Event::Repair { .. } => {}
        }
    }
    let logged: Vec<&Event> = events.iter().map(|(_, e)| e).collect();
    for (i, (got, want)) in state.log.iter().zip(&logged).enumerate() {
        if got != *want {
            return Err(SimError::Replay {
                line: events[i].0,
                reason: "event differs on replay".into(),
            });
        }
    }
    if state.log.len() != logged.len() {
        return Err(SimError::Replay {
            line: events.last().map_or(1, |(l, _)| *l),
            reason: format!(
                "replay produced {} events, log has {}",
                state.log.len(),
                logged.len()
            ),
        });
    }
    Ok(state)
}
