//! Byte-level simulation: split files, fill caches, send XORs, decode.

use log::warn;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::array::{Cell, CodedArray, SenderMap};
use crate::math::{fmt_ratio, Ratio};
use crate::scheme::SchemeBundle;
use crate::{Error, Result};

/// `N` files of `B` bytes each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Library {
    files: Vec<Vec<u8>>,
}

impl Library {
    pub fn files(&self) -> &[Vec<u8>] {
        &self.files
    }

    pub fn file_len(&self) -> usize {
        self.files.first().map_or(0, Vec::len)
    }
}

/// Files zero-padded to a multiple of `F` and cut into `F` equal packets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketStore {
    f: usize,
    packet_len: usize,
    packets: Vec<Vec<u8>>,
}

impl PacketStore {
    pub fn from_library(lib: &Library, f: usize) -> Result<Self> {
        if f == 0 {
            return Err(Error::invalid("F must be positive"));
        }
        let packet_len = lib.file_len().div_ceil(f).max(1);
        let mut packets = Vec::with_capacity(lib.files().len() * f);
        for file in lib.files() {
            let mut padded = file.clone();
            padded.resize(packet_len * f, 0);
            packets.extend(padded.chunks(packet_len).map(<[u8]>::to_vec));
        }
        Ok(PacketStore { f, packet_len, packets })
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn packet_len(&self) -> usize {
        self.packet_len
    }

    pub fn n_files(&self) -> usize {
        self.packets.len() / self.f
    }

    /// `file` and `row` are 0-based.
    pub fn packet(&self, file: usize, row: usize) -> &[u8] {
        &self.packets[file * self.f + row]
    }

    /// Concatenated packets of one file, padding included.
    pub fn reassemble(&self, file: usize) -> Vec<u8> {
        (0..self.f).flat_map(|r| self.packet(file, r).iter().copied()).collect()
    }
}

/// Deterministic library and its packets.
pub fn split_library(n_files: usize, file_len: usize, f: usize, seed: u64) -> Result<(Library, PacketStore)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    split_library_with(n_files, file_len, f, &mut rng)
}

fn split_library_with(n_files: usize, file_len: usize, f: usize, rng: &mut impl RngCore) -> Result<(Library, PacketStore)> {
    if n_files == 0 || file_len == 0 || f == 0 {
        return Err(Error::invalid("N, B and F must be positive"));
    }
    let files = (0..n_files)
        .map(|_| {
            let mut buf = vec![0u8; file_len];
            rng.fill_bytes(&mut buf);
            buf
        })
        .collect();
    let lib = Library { files };
    let store = PacketStore::from_library(&lib, f)?;
    Ok((lib, store))
}

/// Demanded file per user, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandVector(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DemandMode {
    /// Distinct files when `N >= K`.
    Worst,
    /// Uniform with repetition.
    Random,
    Fixed(Vec<usize>),
}

pub fn make_demand(mode: &DemandMode, k: usize, n_files: usize, rng: &mut impl Rng) -> Result<DemandVector> {
    let d = match mode {
        DemandMode::Fixed(d) => {
            if d.len() != k || d.iter().any(|&x| x == 0 || x > n_files) {
                return Err(Error::invalid(format!("demand must list {k} files from 1..={n_files}")));
            }
            d.clone()
        }
        DemandMode::Worst if n_files >= k => {
            let mut all: Vec<usize> = (1..=n_files).collect();
            all.shuffle(rng);
            all.truncate(k);
            all
        }
        DemandMode::Worst | DemandMode::Random => {
            if *mode == DemandMode::Worst {
                warn!("N={n_files} < K={k}: distinct demands impossible, drawing with repetition");
            }
            (0..k).map(|_| rng.gen_range(1..=n_files)).collect()
        }
    };
    Ok(DemandVector(d))
}

/// Rows stored by each cache node (or by each user when caches are dedicated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheContents {
    pub nodes: Vec<Vec<usize>>,
}

/// Fills caches from the placement array, or from the delivery stars for dedicated caches.
pub fn place(bundle: &SchemeBundle, store: &PacketStore) -> Result<CacheContents> {
    if store.f() != bundle.delivery.rows() {
        return Err(Error::invalid(format!("packets split into {} rows, array has {}", store.f(), bundle.delivery.rows())));
    }
    let nodes = match &bundle.layout {
        Some(layout) => (0..layout.placement.caches())
            .map(|c| (0..layout.placement.rows()).filter(|&r| layout.placement.is_star(r, c)).collect())
            .collect(),
        None => (0..bundle.delivery.cols())
            .map(|k| (0..bundle.delivery.rows()).filter(|&r| bundle.delivery.get(r, k).is_star()).collect())
            .collect(),
    };
    Ok(CacheContents { nodes })
}

/// `access[k][row]`: user `k` holds or can read that row of every file.
pub fn user_access(bundle: &SchemeBundle, caches: &CacheContents) -> Vec<Vec<bool>> {
    let f = bundle.delivery.rows();
    let flags = |rows: &[usize]| {
        let mut v = vec![false; f];
        for &r in rows {
            v[r] = true;
        }
        v
    };
    match &bundle.layout {
        Some(layout) => layout
            .topology
            .users()
            .iter()
            .map(|b| {
                let mut acc = vec![false; f];
                for &c in b {
                    for &r in &caches.nodes[c] {
                        acc[r] = true;
                    }
                }
                acc
            })
            .collect(),
        None => caches.nodes.iter().map(|rows| flags(rows)).collect(),
    }
}

/// `(file, row, user)` triple behind one cell of a transmission; all 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Part {
    pub file: usize,
    pub row: usize,
    pub user: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    pub label: u32,
    pub sender: usize,
    pub payload: Vec<u8>,
    pub parts: Vec<Part>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransmissionLog {
    pub transmissions: Vec<Transmission>,
}

impl TransmissionLog {
    /// `(label, sender)` pairs, independent of the demand.
    pub fn schedule(&self) -> Vec<(u32, usize)> {
        self.transmissions.iter().map(|t| (t.label, t.sender)).collect()
    }

    pub fn sent_by(&self, k: usize) -> Vec<usize> {
        let mut out = vec![0; k];
        for t in &self.transmissions {
            out[t.sender] += 1;
        }
        out
    }
}

fn xor_into(acc: &mut [u8], p: &[u8]) {
    for (a, b) in acc.iter_mut().zip(p) {
        *a ^= b;
    }
}

/// One XOR per integer, sent by `φ(s)`, which must hold every packet it combines.
pub fn deliver(
    delivery: &CodedArray,
    phi: &SenderMap,
    demand: &DemandVector,
    store: &PacketStore,
    access: &[Vec<bool>],
) -> Result<TransmissionLog> {
    if demand.0.len() != delivery.cols() {
        return Err(Error::invalid("demand length differs from K"));
    }
    let mut transmissions = Vec::new();
    for (i, cells) in delivery.label_cells().into_iter().enumerate() {
        let label = i as u32 + 1;
        let sender = phi.sender(label).ok_or_else(|| Error::invalid(format!("no sender for s{label}")))?;
        let mut payload = vec![0u8; store.packet_len()];
        let mut parts = Vec::with_capacity(cells.len());
        for (row, user) in cells {
            if !access.get(sender).is_some_and(|a| a[row]) {
                return Err(Error::ProtocolViolation { label, sender: sender + 1, row: row + 1 });
            }
            let file = demand.0[user] - 1;
            xor_into(&mut payload, store.packet(file, row));
            parts.push(Part { file, row, user });
        }
        transmissions.push(Transmission { label, sender, payload, parts });
    }
    Ok(TransmissionLog { transmissions })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Recovered demanded file per user, padding removed.
    pub recovered: Vec<Vec<u8>>,
    /// `(row, label)` for each packet obtained from a transmission.
    pub traces: Vec<Vec<(usize, u32)>>,
}

/// Each missing packet comes from the single transmission labelling its cell, after XOR-ing out
/// the packets the user can read.
pub fn decode_all(
    delivery: &CodedArray,
    log: &TransmissionLog,
    demand: &DemandVector,
    access: &[Vec<bool>],
    store: &PacketStore,
    library: &Library,
) -> Result<DecodeOutcome> {
    let mut recovered = Vec::with_capacity(delivery.cols());
    let mut traces = Vec::with_capacity(delivery.cols());
    for user in 0..delivery.cols() {
        let want = demand.0[user] - 1;
        let mut file = Vec::with_capacity(store.f() * store.packet_len());
        let mut trace = Vec::new();
        for row in 0..delivery.rows() {
            match delivery.get(row, user) {
                Cell::Star => {
                    if !access[user][row] {
                        return Err(Error::ConsistencyViolation { row: row + 1, user: user + 1 });
                    }
                    file.extend_from_slice(store.packet(want, row));
                }
                Cell::Label(label) => {
                    let fail = Error::DecodeFailure { user: user + 1, row: row + 1, label };
                    let tx = log.transmissions.get(label as usize - 1).filter(|t| t.label == label).ok_or(fail.clone())?;
                    let mut packet = tx.payload.clone();
                    let mut own = 0;
                    for p in &tx.parts {
                        if p.user == user && p.row == row {
                            own += 1;
                            continue;
                        }
                        if !access[user][p.row] {
                            return Err(fail);
                        }
                        xor_into(&mut packet, store.packet(p.file, p.row));
                    }
                    if own != 1 {
                        return Err(fail);
                    }
                    file.extend_from_slice(&packet);
                    trace.push((row, label));
                }
            }
        }
        file.truncate(library.file_len());
        if file != library.files()[want] {
            let bad = file
                .iter()
                .zip(&library.files()[want])
                .position(|(a, b)| a != b)
                .map_or(0, |byte| byte / store.packet_len());
            let label = delivery.get(bad, user).label().unwrap_or(0);
            return Err(Error::DecodeFailure { user: user + 1, row: bad + 1, label });
        }
        recovered.push(file);
        traces.push(trace);
    }
    Ok(DecodeOutcome { recovered, traces })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub n_files: usize,
    pub file_len: usize,
    pub demand: DemandMode,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentReport {
    pub k: usize,
    pub f: usize,
    pub n_files: usize,
    pub file_len: usize,
    pub demand: DemandVector,
    pub transmissions: usize,
    pub load: Ratio,
    pub sent: Vec<usize>,
    pub log: TransmissionLog,
}

impl ExperimentReport {
    /// `key=value` lines; `verbose` appends one hex line per transmission.
    pub fn to_text(&self, verbose: bool) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let mut out = format!(
            "K={}\nF={}\nN={}\nB={}\ndemand={}\ntransmissions={}\nR={}\nsent={}\ndecode=ok\n",
            self.k,
            self.f,
            self.n_files,
            self.file_len,
            join(&self.demand.0),
            self.transmissions,
            fmt_ratio(&self.load),
            join(&self.sent),
        );
        if verbose {
            for t in &self.log.transmissions {
                let hex: String = t.payload.iter().map(|b| format!("{b:02x}")).collect();
                out.push_str(&format!("tx s{} sender={} payload={hex}\n", t.label, t.sender + 1));
            }
        }
        out
    }
}

/// Library, placement, delivery and decoding for one demand; fails on the first undecodable packet.
pub fn run_experiment(bundle: &SchemeBundle, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let f = bundle.delivery.rows();
    let k = bundle.delivery.cols();
    let (library, store) = split_library_with(cfg.n_files, cfg.file_len, f, &mut rng)?;
    let demand = make_demand(&cfg.demand, k, cfg.n_files, &mut rng)?;
    let caches = place(bundle, &store)?;
    let access = user_access(bundle, &caches);
    let log = deliver(&bundle.delivery, &bundle.phi, &demand, &store, &access)?;
    decode_all(&bundle.delivery, &log, &demand, &access, &store, &library)?;
    let transmissions = log.transmissions.len();
    Ok(ExperimentReport {
        k,
        f,
        n_files: cfg.n_files,
        file_len: cfg.file_len,
        demand,
        transmissions,
        load: Ratio::new(transmissions as i128, f as i128),
        sent: log.sent_by(k),
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn packets_reassemble() {
        let (lib, store) = split_library(4, 4096, 4, 7).unwrap();
        assert_eq!(store.packet_len(), 1024);
        assert_eq!(store.n_files(), 4);
        for n in 0..4 {
            assert_eq!(store.reassemble(n), lib.files()[n]);
        }
        let (lib, store) = split_library(7, 21, 21, 1).unwrap();
        assert_eq!(store.packet_len(), 1);
        assert_eq!(lib.file_len(), 21);
        assert_eq!(split_library(4, 4096, 4, 7).unwrap().0, split_library(4, 4096, 4, 7).unwrap().0);
    }

    #[test]
    fn padding() {
        let (lib, store) = split_library(2, 10, 4, 3).unwrap();
        assert_eq!(store.packet_len(), 3);
        let mut r = store.reassemble(1);
        assert_eq!(&r[10..], &[0, 0]);
        r.truncate(10);
        assert_eq!(r, lib.files()[1]);
    }

    #[test]
    fn four_user_transmission() {
        let (arr, phi) = fixtures::four_user_dpda();
        let bundle = SchemeBundle::dedicated(arr, phi).unwrap();
        let (lib, store) = split_library(4, 8, 4, 11).unwrap();
        let caches = place(&bundle, &store).unwrap();
        assert_eq!(caches.nodes[0], vec![0, 2]);
        let access = user_access(&bundle, &caches);
        let demand = DemandVector(vec![4, 2, 1, 3]);
        let log = deliver(&bundle.delivery, &bundle.phi, &demand, &store, &access).unwrap();
        // user 1 sends W_{3,1} xor W_{1,3}
        let t = log.transmissions.iter().find(|t| t.sender == 0).unwrap();
        let mut expect = store.packet(2, 0).to_vec();
        xor_into(&mut expect, store.packet(0, 2));
        assert_eq!(t.payload, expect);
        let out = decode_all(&bundle.delivery, &log, &demand, &access, &store, &lib).unwrap();
        assert_eq!(out.recovered[0], lib.files()[3]);
        assert_eq!(out.traces[0].len(), 2);
    }

    #[test]
    fn demand_modes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let d = make_demand(&DemandMode::Worst, 5, 7, &mut rng).unwrap();
        let mut s = d.0.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 5);
        let d = make_demand(&DemandMode::Worst, 5, 2, &mut rng).unwrap();
        assert!(d.0.iter().all(|&x| (1..=2).contains(&x)));
        assert!(make_demand(&DemandMode::Fixed(vec![1, 9]), 2, 4, &mut rng).is_err());
    }
}
