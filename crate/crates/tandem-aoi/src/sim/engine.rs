//! The event-driven engine.

use std::collections::{BinaryHeap, VecDeque};
use std::io::Write;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::report::SimReport;
use super::SimError;
use crate::analytics::SystemParams;
use crate::transforms::ServiceDistribution;

pub(crate) const MIN_PACKETS: usize = 1_000;
const CALENDAR_BOUND: usize = 1_024;

/// Packet class: priority packets traverse both nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Class {
    Priority,
    NonPriority,
}

impl Class {
    pub fn index(self) -> usize {
        match self {
            Class::Priority => 0,
            Class::NonPriority => 1,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Class::Priority => 1,
            Class::NonPriority => 2,
        }
    }
}

/// Deliberate misbehaviour for negative-control tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaultInjection {
    #[default]
    Off,
    /// Dispatch the non-priority line first at the second node.
    PriorityInversion,
}

/// Extended run options beyond the `(params, n, seed, warmup)` signature.
#[derive(Debug, Clone, Default)]
pub struct SimOptions {
    pub warmup_fraction: f64,
    pub fault: FaultInjection,
    /// Time grid for empirical delay/peak-age CDFs.
    pub cdf_grid: Option<Vec<f64>>,
    /// `s` values at which to estimate `E[exp(-s T)]` per class.
    pub lst_probes: Vec<f64>,
    /// Tab-separated event trace destination.
    pub trace_path: Option<PathBuf>,
}

/// One event-trace line: `time  kind  class  packet  node`.
#[derive(Debug, Clone)]
pub struct TraceRecord {
    pub time: f64,
    pub kind: &'static str,
    pub class: u8,
    pub packet: u64,
    pub node: u8,
}

impl TraceRecord {
    pub fn tsv(&self) -> String {
        format!(
            "{:.9}\t{}\t{}\t{}\t{}",
            self.time, self.kind, self.class, self.packet, self.node
        )
    }
}

#[derive(Debug, Clone)]
pub(crate) struct PacketRec {
    pub class: Class,
    pub t_gen: f64,
    /// Node-1 service requirement (priority packets only, else NaN).
    pub n1_svc: f64,
    pub n2_svc: f64,
    pub t_enter_node2: f64,
    pub t_svc_start_node2: f64,
    pub t_depart: f64,
    /// Class in service at node 2 the moment this packet joined it.
    pub entry_in_service: Option<Class>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Event {
    time: f64,
    /// Tie-break: arrivals before node-1 departures before node-2
    /// departures at equal timestamps.
    rank: u8,
    id: u64,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // reversed: BinaryHeap is a max-heap, we want the earliest event
        other
            .time
            .partial_cmp(&self.time)
            .expect("finite event times")
            .then(other.rank.cmp(&self.rank))
            .then(other.id.cmp(&self.id))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

const RANK_ARRIVAL: u8 = 0;
const RANK_N1_DEPART: u8 = 1;
const RANK_N2_DEPART: u8 = 2;

struct Streams {
    interarrival: ChaCha12Rng,
    marks: ChaCha12Rng,
    n1_service: ChaCha12Rng,
    n2_service: [ChaCha12Rng; 2],
}

impl Streams {
    fn new(seed: u64) -> Self {
        let stream = |k: u64| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(k);
            rng
        };
        Streams {
            interarrival: stream(1),
            marks: stream(2),
            n1_service: stream(3),
            n2_service: [stream(4), stream(5)],
        }
    }
}

pub(crate) struct Engine<'a> {
    params: &'a SystemParams<f64>,
    fault: FaultInjection,
    streams: Streams,
    calendar: BinaryHeap<Event>,
    pub packets: Vec<PacketRec>,
    clock: f64,
    // node 1: single server, FIFO, class-1 only
    n1_in_service: Option<u64>,
    n1_queue: VecDeque<u64>,
    // node 2: single server, two lines, head-of-line priority
    n2_in_service: Option<u64>,
    n2_q1: VecDeque<u64>,
    n2_q2: VecDeque<u64>,
    pub generated: [usize; 2],
    pub delivered: [usize; 2],
    pub departure_times: Vec<f64>,
    /// Per class, `(t_gen, t_depart)` in departure order.
    pub deliveries: [Vec<(f64, f64)>; 2],
    // invariant counters
    pub priority_safety_violations: usize,
    pub non_preemption_violations: usize,
    pub work_conservation_violations: usize,
    pub departure_order_violations: usize,
    last_departure: [f64; 2],
    trace: Option<std::io::BufWriter<std::fs::File>>,
}

impl<'a> Engine<'a> {
    fn new(params: &'a SystemParams<f64>, seed: u64, opts: &SimOptions) -> Result<Self, SimError> {
        let trace = match &opts.trace_path {
            Some(path) => Some(std::io::BufWriter::new(
                std::fs::File::create(path)
                    .map_err(|e| SimError::Resource(format!("trace file: {e}")))?,
            )),
            None => None,
        };
        Ok(Engine {
            params,
            fault: opts.fault,
            streams: Streams::new(seed),
            calendar: BinaryHeap::new(),
            packets: Vec::new(),
            clock: 0.0,
            n1_in_service: None,
            n1_queue: VecDeque::new(),
            n2_in_service: None,
            n2_q1: VecDeque::new(),
            n2_q2: VecDeque::new(),
            generated: [0, 0],
            delivered: [0, 0],
            departure_times: Vec::new(),
            deliveries: [Vec::new(), Vec::new()],
            priority_safety_violations: 0,
            non_preemption_violations: 0,
            work_conservation_violations: 0,
            departure_order_violations: 0,
            last_departure: [f64::NEG_INFINITY; 2],
            trace,
        })
    }

    fn emit(&mut self, kind: &'static str, class: Class, packet: u64, node: u8) {
        if let Some(w) = self.trace.as_mut() {
            let rec = TraceRecord {
                time: self.clock,
                kind,
                class: class.number(),
                packet,
                node,
            };
            let _ = writeln!(w, "{}", rec.tsv());
        }
    }

    fn draw_exp(rng: &mut ChaCha12Rng, rate: f64) -> f64 {
        let u: f64 = rng.random();
        -(1.0 - u).ln() / rate
    }

    fn schedule(&mut self, ev: Event) -> Result<(), SimError> {
        self.calendar.push(ev);
        if self.calendar.len() > CALENDAR_BOUND {
            return Err(SimError::Resource(format!(
                "event calendar grew past {CALENDAR_BOUND} entries"
            )));
        }
        Ok(())
    }

    fn run(&mut self, n_packets: usize) -> Result<(), SimError> {
        let first = Self::draw_exp(&mut self.streams.interarrival, self.params.lambda());
        self.schedule(Event {
            time: first,
            rank: RANK_ARRIVAL,
            id: u64::MAX, // arrival events carry no packet id yet
        })?;
        while let Some(ev) = self.calendar.pop() {
            debug_assert!(ev.time >= self.clock, "time must not run backwards");
            self.clock = ev.time;
            match ev.rank {
                RANK_ARRIVAL => self.on_arrival()?,
                RANK_N1_DEPART => self.on_node1_departure(ev.id)?,
                RANK_N2_DEPART => self.on_node2_departure(ev.id)?,
                _ => unreachable!(),
            }
            self.check_work_conservation();
            if self.departure_times.len() >= n_packets {
                break;
            }
        }
        if let Some(w) = self.trace.as_mut() {
            let _ = w.flush();
        }
        Ok(())
    }

    fn on_arrival(&mut self) -> Result<(), SimError> {
        let id = self.packets.len() as u64;
        let mark: f64 = self.streams.marks.random();
        let class = if mark < self.params.p() {
            Class::Priority
        } else {
            Class::NonPriority
        };
        let n1_svc = match class {
            Class::Priority => Self::draw_exp(&mut self.streams.n1_service, self.params.mu()),
            Class::NonPriority => f64::NAN,
        };
        let svc_dist: &ServiceDistribution<f64> = match class {
            Class::Priority => self.params.svc1(),
            Class::NonPriority => self.params.svc2(),
        };
        let n2_svc = svc_dist.sample(&mut self.streams.n2_service[class.index()]);
        self.generated[class.index()] += 1;
        let rec = PacketRec {
            class,
            t_gen: self.clock,
            n1_svc,
            n2_svc,
            t_enter_node2: f64::NAN,
            t_svc_start_node2: f64::NAN,
            t_depart: f64::NAN,
            entry_in_service: None,
        };
        self.packets.push(rec);
        self.emit("gen", class, id, 0);

        match class {
            Class::Priority => {
                if self.n1_in_service.is_none() {
                    self.start_node1(id)?;
                } else {
                    self.n1_queue.push_back(id);
                }
            }
            Class::NonPriority => {
                self.enter_node2(id);
                self.dispatch_node2()?;
            }
        }

        // next generation
        let dt = Self::draw_exp(&mut self.streams.interarrival, self.params.lambda());
        let t = self.clock + dt;
        self.schedule(Event {
            time: t,
            rank: RANK_ARRIVAL,
            id: u64::MAX,
        })
    }

    fn start_node1(&mut self, id: u64) -> Result<(), SimError> {
        self.n1_in_service = Some(id);
        let svc = self.packets[id as usize].n1_svc;
        self.schedule(Event {
            time: self.clock + svc,
            rank: RANK_N1_DEPART,
            id,
        })
    }

    fn enter_node2(&mut self, id: u64) {
        let in_service = self
            .n2_in_service
            .map(|sid| self.packets[sid as usize].class);
        let rec = &mut self.packets[id as usize];
        rec.t_enter_node2 = self.clock;
        rec.entry_in_service = in_service;
        match rec.class {
            Class::Priority => self.n2_q1.push_back(id),
            Class::NonPriority => self.n2_q2.push_back(id),
        }
    }

    fn on_node1_departure(&mut self, id: u64) -> Result<(), SimError> {
        debug_assert_eq!(self.n1_in_service, Some(id));
        self.n1_in_service = None;
        self.emit("n1_dep", Class::Priority, id, 1);
        self.enter_node2(id);
        if let Some(next) = self.n1_queue.pop_front() {
            self.start_node1(next)?;
        }
        self.dispatch_node2()
    }

    fn dispatch_node2(&mut self) -> Result<(), SimError> {
        if self.n2_in_service.is_some() {
            return Ok(());
        }
        let pick_q2_first = matches!(self.fault, FaultInjection::PriorityInversion);
        let (from_q2, id) = if pick_q2_first {
            if let Some(id) = self.n2_q2.pop_front() {
                (true, id)
            } else if let Some(id) = self.n2_q1.pop_front() {
                (false, id)
            } else {
                return Ok(());
            }
        } else if let Some(id) = self.n2_q1.pop_front() {
            (false, id)
        } else if let Some(id) = self.n2_q2.pop_front() {
            (true, id)
        } else {
            return Ok(());
        };
        if from_q2 && !self.n2_q1.is_empty() {
            self.priority_safety_violations += 1;
        }
        self.n2_in_service = Some(id);
        let rec = &mut self.packets[id as usize];
        rec.t_svc_start_node2 = self.clock;
        let svc = rec.n2_svc;
        let class = rec.class;
        self.emit("n2_start", class, id, 2);
        self.schedule(Event {
            time: self.clock + svc,
            rank: RANK_N2_DEPART,
            id,
        })
    }

    fn on_node2_departure(&mut self, id: u64) -> Result<(), SimError> {
        debug_assert_eq!(self.n2_in_service, Some(id));
        self.n2_in_service = None;
        let rec = &mut self.packets[id as usize];
        rec.t_depart = self.clock;
        // non-preemption: departure minus service start must equal the
        // sampled service requirement
        if (rec.t_depart - rec.t_svc_start_node2 - rec.n2_svc).abs()
            > 1e-9 * (1.0 + rec.t_depart.abs())
        {
            self.non_preemption_violations += 1;
        }
        let class = rec.class;
        let gen = rec.t_gen;
        if self.clock <= self.last_departure[class.index()] {
            self.departure_order_violations += 1;
        }
        self.last_departure[class.index()] = self.clock;
        self.delivered[class.index()] += 1;
        self.deliveries[class.index()].push((gen, self.clock));
        self.departure_times.push(self.clock);
        self.emit("n2_dep", class, id, 2);
        self.dispatch_node2()
    }

    /// Packets still inside the system at termination, tallied from the
    /// actual queue contents per class.
    pub(crate) fn residual_occupancy(&self) -> [usize; 2] {
        let mut counts = [0usize; 2];
        let mut count = |id: &u64| {
            counts[self.packets[*id as usize].class.index()] += 1;
        };
        self.n1_queue.iter().for_each(&mut count);
        self.n1_in_service.iter().for_each(&mut count);
        self.n2_q1.iter().for_each(&mut count);
        self.n2_q2.iter().for_each(&mut count);
        self.n2_in_service.iter().for_each(&mut count);
        counts
    }

    fn check_work_conservation(&mut self) {
        if self.n2_in_service.is_none() && (!self.n2_q1.is_empty() || !self.n2_q2.is_empty()) {
            self.work_conservation_violations += 1;
        }
        if self.n1_in_service.is_none() && !self.n1_queue.is_empty() {
            self.work_conservation_violations += 1;
        }
    }
}

/// Per-packet lifecycle record for cross-validation studies.
///
/// Timestamps follow the packet through the system; for non-priority
/// packets the node-2 entry time equals the generation time and the node-1
/// service is NaN.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PacketSample {
    pub class: u8,
    pub t_gen: f64,
    pub n1_svc: f64,
    pub t_enter_node2: f64,
    pub t_svc_start_node2: f64,
    pub t_depart: f64,
    /// Class in service at node 2 when this packet joined it (0 = idle).
    pub entry_in_service: u8,
}

/// Like [`run_simulation`], additionally returning every delivered packet's
/// lifecycle record (in generation order).
pub fn run_simulation_packets(
    params: &SystemParams<f64>,
    n_packets: usize,
    seed: u64,
    warmup_fraction: f64,
) -> Result<(SimReport, Vec<PacketSample>), SimError> {
    if n_packets < MIN_PACKETS {
        return Err(SimError::TooFewPackets {
            requested: n_packets,
            minimum: MIN_PACKETS,
        });
    }
    let opts = SimOptions {
        warmup_fraction,
        ..SimOptions::default()
    };
    if !(0.0..0.5).contains(&opts.warmup_fraction) {
        return Err(SimError::BadWarmup(opts.warmup_fraction));
    }
    let mut engine = Engine::new(params, seed, &opts)?;
    engine.run(n_packets)?;
    let samples = engine
        .packets
        .iter()
        .filter(|p| p.t_depart.is_finite())
        .map(|p| PacketSample {
            class: p.class.number(),
            t_gen: p.t_gen,
            n1_svc: p.n1_svc,
            t_enter_node2: p.t_enter_node2,
            t_svc_start_node2: p.t_svc_start_node2,
            t_depart: p.t_depart,
            entry_in_service: p.entry_in_service.map(|c| c.number()).unwrap_or(0),
        })
        .collect();
    let report = SimReport::assemble(params, &engine, n_packets, seed, &opts);
    Ok((report, samples))
}

/// Runs one simulation with default options and the given warmup fraction.
///
/// Statistics cover packets generated after the warmup window (the time of
/// the `floor(warmup_fraction * n_packets)`-th departure). Identical
/// `(params, n_packets, seed)` produce a bit-identical report.
pub fn run_simulation(
    params: &SystemParams<f64>,
    n_packets: usize,
    seed: u64,
    warmup_fraction: f64,
) -> Result<SimReport, SimError> {
    run_simulation_with(
        params,
        n_packets,
        seed,
        &SimOptions {
            warmup_fraction,
            ..SimOptions::default()
        },
    )
}

/// Runs one simulation with full options.
pub fn run_simulation_with(
    params: &SystemParams<f64>,
    n_packets: usize,
    seed: u64,
    opts: &SimOptions,
) -> Result<SimReport, SimError> {
    if n_packets < MIN_PACKETS {
        return Err(SimError::TooFewPackets {
            requested: n_packets,
            minimum: MIN_PACKETS,
        });
    }
    if !(0.0..0.5).contains(&opts.warmup_fraction) {
        return Err(SimError::BadWarmup(opts.warmup_fraction));
    }
    // SystemParams enforces this, but simulation budgets are large enough
    // that a second check is worth having in debug runs
    if params.rho() >= 1.0 || params.rho11() >= 1.0 {
        return Err(SimError::Unstable(format!(
            "rho = {}, rho11 = {}",
            params.rho(),
            params.rho11()
        )));
    }
    let mut engine = Engine::new(params, seed, opts)?;
    engine.run(n_packets)?;
    Ok(SimReport::assemble(params, &engine, n_packets, seed, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ServiceDistribution;

    fn baseline() -> SystemParams<f64> {
        let svc = ServiceDistribution::exponential(1.0).unwrap();
        SystemParams::new(0.5, 0.5, 1.0, svc.clone(), svc).unwrap()
    }

    #[test]
    fn determinism_bit_identical() {
        let params = baseline();
        let a = run_simulation(&params, 5_000, 11, 0.1).unwrap();
        let b = run_simulation(&params, 5_000, 11, 0.1).unwrap();
        assert_eq!(a, b);
        let c = run_simulation(&params, 5_000, 12, 0.1).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn input_validation() {
        let params = baseline();
        assert!(matches!(
            run_simulation(&params, 10, 1, 0.1),
            Err(SimError::TooFewPackets { .. })
        ));
        assert!(matches!(
            run_simulation(&params, 5_000, 1, 0.7),
            Err(SimError::BadWarmup(_))
        ));
    }

    #[test]
    fn all_priority_routing_leaves_class2_empty() {
        let svc = ServiceDistribution::exponential(1.0).unwrap();
        let params = SystemParams::new(0.5, 1.0, 1.0, svc.clone(), svc).unwrap();
        let report = run_simulation(&params, 5_000, 3, 0.1).unwrap();
        assert!(report.class2.is_none());
        assert_eq!(report.delivered[0], 5_000);
        assert_eq!(report.delivered[1], 0);
    }

    #[test]
    fn fault_injection_trips_priority_safety() {
        let params = baseline();
        let opts = SimOptions {
            warmup_fraction: 0.1,
            fault: FaultInjection::PriorityInversion,
            ..SimOptions::default()
        };
        let report = run_simulation_with(&params, 20_000, 5, &opts).unwrap();
        assert!(report.checks.priority_safety_violations > 0);
        // and the clean run does not
        let clean = run_simulation(&params, 20_000, 5, 0.1).unwrap();
        assert_eq!(clean.checks.priority_safety_violations, 0);
    }

    #[test]
    fn trace_file_has_documented_columns() {
        let params = baseline();
        let dir = std::env::temp_dir().join("tandem_aoi_trace_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("trace.tsv");
        let opts = SimOptions {
            warmup_fraction: 0.0,
            trace_path: Some(path.clone()),
            ..SimOptions::default()
        };
        run_simulation_with(&params, 1_000, 9, &opts).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        let cols: Vec<&str> = first.split('\t').collect();
        assert_eq!(cols.len(), 5);
        assert!(cols[0].parse::<f64>().is_ok());
        assert!(["gen", "n1_dep", "n2_start", "n2_dep"].contains(&cols[1]));
        std::fs::remove_file(path).ok();
    }
}
