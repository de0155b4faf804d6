//! Terminal object, products, function spaces, eval/curry and the index completion.

use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{check_axiom, AxiomId};
use crate::error::{Error, Result};
use crate::lubpo::{is_continuous, Lubpo, Mode};
use crate::order::{enumerate_monotone_maps, enumerate_posets, ElemSet, MonoMap, Poset};

/// Largest product carrier that is materialized.
pub const MAX_PRODUCT_CARRIER: usize = 16;
/// Largest `|D|·|E|` accepted when building a function space.
pub const MAX_EXP_PRODUCT: usize = 16;
/// Largest function-space carrier whose naturals are materialized.
pub const MAX_FUNCTION_CARRIER: usize = 16;
/// Largest carrier accepted by [`ccc_laws`].
pub const MAX_LAW_CARRIER: usize = 3;

fn mode_check(what: &str, d: &Lubpo, e: &Lubpo) -> Result<Mode> {
    if d.mode() != e.mode() {
        return Err(Error::ModeMismatch {
            axiom: what.to_string(),
            mode: format!("{} vs {}", d.mode(), e.mode()),
        });
    }
    Ok(d.mode())
}

/// The one-point lubpo.
pub fn terminal(mode: Mode) -> Lubpo {
    let p = Poset::with_labels(1, &[], vec!["*".into()]).expect("one point");
    Lubpo::trivial(p, mode)
}

/// Continuous maps `d → e`, in lexicographic order of their tables.
pub fn continuous_maps(d: &Lubpo, e: &Lubpo) -> Vec<MonoMap> {
    enumerate_monotone_maps(d.poset(), e.poset())
        .filter(|f| is_continuous(f, d, e))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpace {
    pub lubpo: Lubpo,
    pub left: usize,
    pub right: usize,
}

impl ProductSpace {
    pub fn pair(&self, x: usize, y: usize) -> usize {
        x * self.right + y
    }

    pub fn split(&self, z: usize) -> (usize, usize) {
        (z / self.right, z % self.right)
    }

    pub fn proj1(&self) -> MonoMap {
        MonoMap {
            source: self.left * self.right,
            target: self.left,
            table: (0..self.left * self.right).map(|z| self.split(z).0).collect(),
        }
    }

    pub fn proj2(&self) -> MonoMap {
        MonoMap {
            source: self.left * self.right,
            target: self.right,
            table: (0..self.left * self.right).map(|z| self.split(z).1).collect(),
        }
    }

    /// `⟨f, g⟩`: `c ↦ (f c, g c)`.
    pub fn pairing(&self, f: &MonoMap, g: &MonoMap) -> MonoMap {
        MonoMap {
            source: f.source,
            target: self.left * self.right,
            table: f.table.iter().zip(&g.table).map(|(&x, &y)| self.pair(x, y)).collect(),
        }
    }

    /// `f × g` into this product, from the product `src`.
    pub fn cross(&self, src: &ProductSpace, f: &MonoMap, g: &MonoMap) -> MonoMap {
        MonoMap {
            source: src.left * src.right,
            target: self.left * self.right,
            table: (0..src.left * src.right)
                .map(|z| {
                    let (x, y) = src.split(z);
                    self.pair(f.apply(x), g.apply(y))
                })
                .collect(),
        }
    }

    fn projections(&self, a: ElemSet) -> (ElemSet, ElemSet) {
        a.iter().fold((ElemSet::EMPTY, ElemSet::EMPTY), |(l, r), z| {
            let (x, y) = self.split(z);
            (l.insert(x), r.insert(y))
        })
    }
}

/// Componentwise order; a set is natural when both projections are (and it is directed, in
/// directed mode).
pub fn product(d: &Lubpo, e: &Lubpo) -> Result<ProductSpace> {
    let mode = mode_check("product", d, e)?;
    let n = d.size() * e.size();
    if n > MAX_PRODUCT_CARRIER {
        return Err(Error::BoundExceeded {
            what: "product carrier",
            requested: n,
            bound: MAX_PRODUCT_CARRIER,
        });
    }
    let shell = product_carrier(d, e, mode);
    let poset = shell.lubpo.poset().clone();
    let sets: Vec<ElemSet> = poset
        .carrier()
        .subsets()
        .filter(|&a| mode == Mode::General || poset.is_directed(a))
        .filter(|&a| {
            let (l, r) = shell.projections(a);
            d.is_natural(l) && e.is_natural(r)
        })
        .collect();
    Ok(ProductSpace {
        lubpo: Lubpo::from_sets(poset, sets, mode)?,
        ..shell
    })
}

/// The product order with only singletons natural, for index arithmetic on carriers too large
/// to list the naturals of.
fn product_carrier(d: &Lubpo, e: &Lubpo, mode: Mode) -> ProductSpace {
    ProductSpace {
        lubpo: Lubpo::trivial(d.poset().product(e.poset()), mode),
        left: d.size(),
        right: e.size(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `F` is natural when every `F x` is natural with lub `f x`.
    Pointwise,
    /// `F` is natural when eval sends every directed `A ⊆ F × |D|` with natural second
    /// projection to a natural set.
    General,
}

/// Continuous maps `D → E` under the pointwise order.
#[derive(Clone, Debug)]
pub struct FunctionSpace {
    dom: Lubpo,
    cod: Lubpo,
    maps: Vec<MonoMap>,
    flavor: Flavor,
    lubpo: Lubpo,
}

impl FunctionSpace {
    fn build(d: &Lubpo, e: &Lubpo, flavor: Flavor) -> Result<FunctionSpace> {
        let mode = mode_check("function space", d, e)?;
        if flavor == Flavor::General && mode != Mode::Directed {
            return Err(Error::ModeMismatch {
                axiom: "general function space".into(),
                mode: mode.to_string(),
            });
        }
        if d.size() * e.size() > MAX_EXP_PRODUCT {
            return Err(Error::BoundExceeded {
                what: "function space |D|*|E|",
                requested: d.size() * e.size(),
                bound: MAX_EXP_PRODUCT,
            });
        }
        let maps = continuous_maps(d, e);
        if maps.len() > MAX_FUNCTION_CARRIER {
            return Err(Error::BoundExceeded {
                what: "function space carrier",
                requested: maps.len(),
                bound: MAX_FUNCTION_CARRIER,
            });
        }
        let mut pairs = Vec::new();
        for (i, f) in maps.iter().enumerate() {
            for (j, g) in maps.iter().enumerate() {
                let below = i != j && (0..d.size()).all(|x| e.poset().leq(f.apply(x), g.apply(x)));
                if below {
                    pairs.push((i, j));
                }
            }
        }
        let labels = (0..maps.len()).map(|i| format!("f{i}")).collect();
        let poset = Poset::with_labels(maps.len(), &pairs, labels)?;
        let mut fs = FunctionSpace {
            dom: d.clone(),
            cod: e.clone(),
            maps,
            flavor,
            lubpo: Lubpo::trivial(poset.clone(), mode),
        };
        let sets: Vec<ElemSet> = poset.carrier().subsets().filter(|&s| fs.is_natural(s)).collect();
        fs.lubpo = Lubpo::from_sets(poset, sets, mode)?;
        Ok(fs)
    }

    pub fn maps(&self) -> &[MonoMap] {
        &self.maps
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn domain(&self) -> &Lubpo {
        &self.dom
    }

    pub fn codomain(&self) -> &Lubpo {
        &self.cod
    }

    /// The space as a lubpo over map indices.
    pub fn to_lubpo(&self) -> &Lubpo {
        &self.lubpo
    }

    pub fn index_of(&self, f: &MonoMap) -> Option<usize> {
        self.maps.iter().position(|g| g.table == f.table)
    }

    /// Decides naturality of a set of map indices from the definition.
    pub fn is_natural(&self, fset: ElemSet) -> bool {
        let p = self.lubpo.poset();
        if self.lubpo.mode() == Mode::Directed && !p.is_directed(fset) {
            return false;
        }
        let Some(top) = p.lub(fset) else { return false };
        match self.flavor {
            Flavor::Pointwise => self.pointwise_natural(fset, top),
            Flavor::General => self.general_natural(fset, top),
        }
    }

    fn pointwise_natural(&self, fset: ElemSet, top: usize) -> bool {
        (0..self.dom.size()).all(|x| {
            let img: ElemSet = fset.iter().map(|g| self.maps[g].apply(x)).collect();
            self.cod.is_natural(img) && self.cod.lub(img) == Some(self.maps[top].apply(x))
        })
    }

    fn general_natural(&self, fset: ElemSet, top: usize) -> bool {
        self.evaluates_naturally(fset, top)
    }

    /// Whether eval sends every directed `A ⊆ fset × |D|` with `π₁A = fset` and `π₂A` a directed
    /// natural to a natural of the codomain.
    ///
    /// Finite directed sets contain their lub, so every such `A` contains `(top, lub π₂A)` and is
    /// directed for that reason alone. An image `Y` is reached exactly when the pairs evaluating
    /// into `Y` cover both projections and hit all of `Y`.
    fn evaluates_naturally(&self, fset: ElemSet, top: usize) -> bool {
        let d = &self.dom;
        let e_all = self.cod.poset().carrier();
        d.naturals().filter(|&(x, _)| d.poset().is_directed(x)).all(|(xset, dtop)| {
            let peak = self.maps[top].apply(dtop);
            e_all.remove(peak).subsets().all(|rest| {
                let y = rest.insert(peak);
                let inside = |g: usize, x: usize| y.contains(self.maps[g].apply(x));
                let covers_f = fset.iter().all(|g| g == top || xset.iter().any(|x| inside(g, x)));
                let covers_x = xset.iter().all(|x| x == dtop || fset.iter().any(|g| inside(g, x)));
                let hit: ElemSet = fset
                    .iter()
                    .flat_map(|g| xset.iter().map(move |x| self.maps[g].apply(x)))
                    .filter(|&v| y.contains(v))
                    .collect();
                let reached = covers_f && covers_x && hit.insert(peak) == y;
                !reached || self.cod.is_natural(y)
            })
        })
    }

    /// Continuity of eval on the product of this space with its domain, decided without listing
    /// the product's naturals: the directed naturals there are the directed sets whose
    /// projections are directed naturals.
    pub fn eval_is_continuous(&self) -> bool {
        let p = self.lubpo.poset();
        self.lubpo
            .naturals()
            .filter(|&(f, _)| p.is_directed(f))
            .all(|(f, top)| self.evaluates_naturally(f, top))
    }

    /// `eval(f, x) = f x`.
    pub fn eval_apply(&self, f: &MonoMap, x: usize) -> Result<usize> {
        if x >= self.dom.size() {
            return Err(Error::NotInCarrier);
        }
        self.index_of(f).map(|i| self.maps[i].apply(x)).ok_or(Error::NotInCarrier)
    }

    /// The eval map from `space × D`, where `space` is the product of this space with its domain.
    pub fn eval_map(&self, space: &ProductSpace) -> MonoMap {
        MonoMap {
            source: space.left * space.right,
            target: self.cod.size(),
            table: (0..space.left * space.right)
                .map(|z| {
                    let (g, x) = space.split(z);
                    self.maps[g].apply(x)
                })
                .collect(),
        }
    }
}

/// `D ⇒ E` with pointwise naturals.
pub fn pointwise_exp(d: &Lubpo, e: &Lubpo) -> Result<FunctionSpace> {
    FunctionSpace::build(d, e, Flavor::Pointwise)
}

/// `D ⇒* E`: same carrier, naturality tested through eval. Directed mode only.
pub fn general_exp(d: &Lubpo, e: &Lubpo) -> Result<FunctionSpace> {
    FunctionSpace::build(d, e, Flavor::General)
}

/// A curried map with its continuity verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curried {
    pub map: MonoMap,
    pub continuous: bool,
}

/// `curry(f) c = λd. f(c, d)` for `f` on the product `cd` of `c` and the space's domain.
pub fn curry_fn(c: &Lubpo, cd: &ProductSpace, fs: &FunctionSpace, f: &MonoMap) -> Result<Curried> {
    if cd.left != c.size() || cd.right != fs.dom.size() || f.table.len() != cd.left * cd.right {
        return Err(Error::NotInCarrier);
    }
    let table = (0..c.size())
        .map(|x| {
            let row: Vec<usize> = (0..cd.right).map(|y| f.apply(cd.pair(x, y))).collect();
            fs.maps.iter().position(|g| g.table == row).ok_or(Error::NotInCarrier)
        })
        .collect::<Result<Vec<_>>>()?;
    let map = MonoMap {
        source: c.size(),
        target: fs.maps.len(),
        table,
    };
    let continuous = is_continuous(&map, c, &fs.lubpo);
    Ok(Curried { map, continuous })
}

/// Completion of a directed index poset by a lub: the whole carrier converges to the top,
/// besides the singletons. A finite directed poset already has a greatest element, so no new
/// top is ever added here.
pub fn bar_index(i: &Poset) -> Result<Lubpo> {
    if !i.is_directed(i.carrier()) {
        return Err(Error::NotDirectedPoset);
    }
    let t = i.greatest().expect("finite directed sets have a greatest member");
    crate::lubpo::make_lubpo(i.clone(), &[(i.carrier(), t)], Mode::Directed)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CccReport {
    pub terminal_unique: bool,
    pub projections_continuous: bool,
    pub pairing_laws: bool,
    pub pairing_unique: bool,
    pub eval_continuous: bool,
    pub exponent_beta: bool,
    pub curry_continuous: bool,
    pub curry_unique: bool,
    /// Bounded S10 verdict on the codomain; laws are only expected when it holds.
    pub codomain_s10: bool,
    pub maps_checked: usize,
    pub failures: Vec<String>,
}

impl CccReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhausts the terminal, product and pointwise-exponent laws over all continuous maps, with
/// `c` as the test object for `d × e` and `c × d → e`.
pub fn ccc_laws(c: &Lubpo, d: &Lubpo, e: &Lubpo) -> Result<CccReport> {
    for x in [c, d, e] {
        if x.size() > MAX_LAW_CARRIER {
            return Err(Error::BoundExceeded {
                what: "law check carrier",
                requested: x.size(),
                bound: MAX_LAW_CARRIER,
            });
        }
    }
    mode_check("ccc laws", c, d)?;
    mode_check("ccc laws", d, e)?;
    let mut rep = CccReport::default();
    let fail = |rep: &mut CccReport, msg: String| rep.failures.push(msg);

    let top = terminal(c.mode());
    rep.terminal_unique = [c, d, e].iter().all(|x| continuous_maps(x, &top).len() == 1);
    if !rep.terminal_unique {
        fail(&mut rep, "terminal: map count differs from one".into());
    }

    // product d × e against test object c
    let de = product(d, e)?;
    let (p1, p2) = (de.proj1(), de.proj2());
    rep.projections_continuous = is_continuous(&p1, &de.lubpo, d) && is_continuous(&p2, &de.lubpo, e);
    if !rep.projections_continuous {
        fail(&mut rep, "projections not continuous".into());
    }
    let (cd_maps, ce_maps) = (continuous_maps(c, d), continuous_maps(c, e));
    let mut laws = true;
    for f in &cd_maps {
        for g in &ce_maps {
            let h = de.pairing(f, g);
            rep.maps_checked += 1;
            if !is_continuous(&h, c, &de.lubpo) || p1.after(&h) != *f || p2.after(&h) != *g {
                laws = false;
                fail(&mut rep, format!("pairing of {:?} and {:?}", f.table, g.table));
            }
        }
    }
    rep.pairing_laws = laws;
    let into_product = continuous_maps(c, &de.lubpo);
    rep.pairing_unique = into_product.len() == cd_maps.len() * ce_maps.len()
        && into_product.iter().all(|h| de.pairing(&p1.after(h), &p2.after(h)) == *h);
    if !rep.pairing_unique {
        fail(&mut rep, "maps into the product do not factor uniquely".into());
    }

    // exponent d ⇒ e against test object c
    let fs = pointwise_exp(d, e)?;
    let fsl = fs.to_lubpo();
    // (D ⇒ E) × D outgrows the product guard quickly; its naturals are only listed when small
    let (fd, listed) = match product(fsl, d) {
        Ok(fd) => (fd, true),
        Err(Error::BoundExceeded { .. }) => (product_carrier(fsl, d, d.mode()), false),
        Err(err) => return Err(err),
    };
    let eval = fs.eval_map(&fd);
    rep.eval_continuous = fs.eval_is_continuous();
    if !rep.eval_continuous {
        fail(&mut rep, "eval not continuous".into());
    }
    if listed && is_continuous(&eval, &fd.lubpo, e) != rep.eval_continuous {
        fail(&mut rep, "eval continuity differs between the image check and the listed product".into());
    }
    let cd = product(c, d)?;
    let id_d = MonoMap::identity(d.poset());
    let uncurry = |h: &MonoMap| eval.after(&fd.cross(&cd, h, &id_d));
    let from_product = continuous_maps(&cd.lubpo, e);
    let (mut beta, mut cont) = (true, true);
    for f in &from_product {
        rep.maps_checked += 1;
        let k = curry_fn(c, &cd, &fs, f)?;
        if !k.continuous {
            cont = false;
            fail(&mut rep, format!("curry of {:?} not continuous", f.table));
        }
        if uncurry(&k.map) != *f {
            beta = false;
            fail(&mut rep, format!("eval after curry differs for {:?}", f.table));
        }
    }
    rep.exponent_beta = beta;
    rep.curry_continuous = cont;
    let into_space = continuous_maps(c, fsl);
    rep.curry_unique = into_space.len() == from_product.len()
        && into_space.iter().all(|h| {
            let f = uncurry(h);
            curry_fn(c, &cd, &fs, &f).is_ok_and(|k| k.map == *h)
        });
    if !rep.curry_unique {
        fail(&mut rep, "maps into the function space do not factor uniquely".into());
    }
    rep.codomain_s10 = if e.mode() == Mode::Directed {
        check_axiom(e, AxiomId::S10, None)?.holds
    } else {
        true
    };
    Ok(rep)
}

/// Result of searching small dlubpos for a continuous `f : C × D → E` whose curried form into
/// `D ⇒* E` is not continuous.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CurrySearchReport {
    pub max_size: usize,
    pub triples: usize,
    pub maps: usize,
    /// Serialized `C`, `D`, `E` and the table of `f`, for each failure found.
    pub witnesses: Vec<(String, String, String, Vec<usize>)>,
}

/// Largest carrier used by [`curry_discontinuity_search`].
pub const MAX_CURRY_SEARCH: usize = 2;

/// Every dlubpo on at most `max_size` elements, up to isomorphism of the underlying order.
pub fn small_dlubpos(max_size: usize) -> Result<Vec<Lubpo>> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        for p in enumerate_posets(n, true)? {
            let optional: Vec<ElemSet> = p
                .carrier()
                .subsets()
                .filter(|&a| a.len() > 1 && p.is_directed(a))
                .collect();
            for pick in ElemSet::full(optional.len()).subsets() {
                let sets = pick.iter().map(|i| optional[i]);
                out.push(Lubpo::from_sets(p.clone(), sets, Mode::Directed)?);
            }
        }
    }
    Ok(out)
}

/// Reports every curry-discontinuity found among dlubpos of at most `max_size` elements.
pub fn curry_discontinuity_search(max_size: usize) -> Result<CurrySearchReport> {
    if max_size > MAX_CURRY_SEARCH {
        return Err(Error::BoundExceeded {
            what: "curry search size",
            requested: max_size,
            bound: MAX_CURRY_SEARCH,
        });
    }
    let all = small_dlubpos(max_size)?;
    let mut triples = Vec::new();
    for c in &all {
        for d in &all {
            for e in &all {
                triples.push((c, d, e));
            }
        }
    }
    let parts: Vec<Result<(usize, Vec<_>)>> = triples
        .par_iter()
        .map(|&(c, d, e)| {
            let fs = general_exp(d, e)?;
            let cd = product(c, d)?;
            let mut found = Vec::new();
            let maps = continuous_maps(&cd.lubpo, e);
            for f in &maps {
                if !curry_fn(c, &cd, &fs, f)?.continuous {
                    use crate::format::serialize;
                    found.push((serialize(c), serialize(d), serialize(e), f.table.clone()));
                }
            }
            Ok((maps.len(), found))
        })
        .collect();
    let mut rep = CurrySearchReport {
        max_size,
        triples: triples.len(),
        ..Default::default()
    };
    for part in parts {
        let (n, found) = part?;
        rep.maps += n;
        rep.witnesses.extend(found);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::format::{parse_file, serialize, Parsed};

    fn c2_full() -> Lubpo {
        fixtures::all_directed(fixtures::c2_poset())
    }

    #[test]
    fn product_of_chains_is_a_diamond() {
        let pr = product(&c2_full(), &c2_full()).unwrap();
        let p = pr.lubpo.poset();
        assert_eq!(p.size(), 4);
        assert_eq!(p.hasse_pairs().len(), 4);
        assert!(p.least().is_some() && p.greatest().is_some());
        assert_eq!(parse_file(&serialize(&pr.lubpo)).unwrap(), Parsed::Lubpo(pr.lubpo.clone()));
    }

    #[test]
    fn terminal_is_a_unit() {
        let d = fixtures::all_directed(fixtures::d4_poset());
        let pr = product(&terminal(Mode::Directed), &d).unwrap();
        assert!(pr.lubpo.poset().is_isomorphic(d.poset()));
        for a in d.poset().carrier().subsets() {
            assert_eq!(pr.lubpo.is_natural(a), d.is_natural(a));
        }
    }

    #[test]
    fn product_with_p7_delta() {
        let p7 = fixtures::p7().delta_restrict();
        let c2 = c2_full();
        let pr = product(&p7, &c2).unwrap();
        let d = 3;
        let a = ElemSet::from_indices([pr.pair(d, 0), pr.pair(d, 1)]);
        assert!(pr.lubpo.is_natural(a));
        let triv = fixtures::singletons(fixtures::c2_poset());
        let pr = product(&p7, &triv).unwrap();
        assert!(!pr.lubpo.is_natural(a));
    }

    #[test]
    fn pointwise_space_on_chains() {
        let fs = pointwise_exp(&fixtures::singletons(fixtures::c2_poset()), &c2_full()).unwrap();
        assert_eq!(fs.maps().len(), 3);
        let l = fs.to_lubpo();
        assert!(l.poset().greatest().is_some() && l.poset().least().is_some());
        for s in l.poset().carrier().subsets() {
            let has_lub_member = l.poset().greatest_in(s).is_some();
            if l.poset().is_directed(s) {
                assert_eq!(l.is_natural(s), has_lub_member);
            }
        }
        let id = MonoMap::identity(&fixtures::c2_poset());
        assert_eq!(fs.eval_apply(&id, 0), Ok(0));
        assert_eq!(fs.eval_apply(&id, 7), Err(Error::NotInCarrier));
        let one = terminal(Mode::Directed);
        assert_eq!(pointwise_exp(&c2_full(), &one).unwrap().maps().len(), 1);
        let from_one = pointwise_exp(&one, &c2_full()).unwrap();
        assert!(from_one.to_lubpo().poset().is_isomorphic(c2_full().poset()));
    }

    #[test]
    fn general_naturals_are_pointwise_naturals() {
        let fx = [
            c2_full(),
            fixtures::singletons(fixtures::c2_poset()),
            fixtures::all_directed(fixtures::c3_poset()),
            fixtures::singletons(fixtures::v_poset()),
        ];
        for d in &fx {
            for e in &fx {
                let pw = pointwise_exp(d, e).unwrap();
                let gn = general_exp(d, e).unwrap();
                assert_eq!(pw.maps(), gn.maps());
                assert!(gn.to_lubpo().natural_sets().is_subset(pw.to_lubpo().natural_sets()));
            }
        }
    }

    /// Enumerates every subset of `F × X` for the general-flavor condition.
    fn general_by_brute_force(fs: &FunctionSpace, fset: ElemSet) -> bool {
        let p = fs.to_lubpo().poset();
        let Some(top) = p.lub(fset) else { return false };
        if !p.is_directed(fset) {
            return false;
        }
        let d = fs.domain();
        d.naturals().filter(|&(x, _)| d.poset().is_directed(x)).all(|(xset, dtop)| {
            let pairs: Vec<(usize, usize)> =
                fset.iter().flat_map(|g| xset.iter().map(move |x| (g, x))).collect();
            ElemSet::full(pairs.len()).subsets().all(|pick| {
                let a: Vec<(usize, usize)> = pick.iter().map(|k| pairs[k]).collect();
                let p1: ElemSet = a.iter().map(|&(g, _)| g).collect();
                let p2: ElemSet = a.iter().map(|&(_, x)| x).collect();
                let directed = a.iter().all(|&(g1, x1)| {
                    a.iter().all(|&(g2, x2)| {
                        a.iter().any(|&(g, x)| {
                            p.leq(g1, g) && p.leq(g2, g) && d.poset().leq(x1, x) && d.poset().leq(x2, x)
                        })
                    })
                });
                if a.is_empty() || !directed || p1 != fset || p2 != xset {
                    return true;
                }
                let img: ElemSet = a.iter().map(|&(g, x)| fs.maps()[g].apply(x)).collect();
                fs.codomain().is_natural(img) && fs.codomain().lub(img) == Some(fs.maps()[top].apply(dtop))
            })
        })
    }

    #[test]
    fn general_naturality_matches_brute_force() {
        let fx = [
            c2_full(),
            fixtures::singletons(fixtures::c2_poset()),
            fixtures::singletons(fixtures::c3_poset()),
            fixtures::all_directed(fixtures::v_poset()),
        ];
        for d in &fx {
            for e in &fx {
                let gn = general_exp(d, e).unwrap();
                for f in gn.to_lubpo().poset().carrier().subsets() {
                    if f.len() * d.size() <= 12 {
                        assert_eq!(gn.is_natural(f), general_by_brute_force(&gn, f));
                    }
                }
            }
        }
    }

    #[test]
    fn curry_of_second_projection() {
        let c = c2_full();
        let d = fixtures::all_directed(fixtures::c3_poset());
        let cd = product(&c, &d).unwrap();
        let fs = pointwise_exp(&d, &d).unwrap();
        let k = curry_fn(&c, &cd, &fs, &cd.proj2()).unwrap();
        assert!(k.continuous);
        let id = fs.index_of(&MonoMap::identity(d.poset())).unwrap();
        assert_eq!(k.map.table, vec![id, id]);
    }

    #[test]
    fn index_completion() {
        let c2 = bar_index(&fixtures::c2_poset()).unwrap();
        assert_eq!(c2.size(), 2);
        assert!(c2.is_natural(ElemSet::full(2)));
        let one = bar_index(&Poset::discrete(1)).unwrap();
        assert_eq!(one.size(), 1);
        assert_eq!(bar_index(&fixtures::v_poset()), Err(Error::NotDirectedPoset));
        assert_eq!(bar_index(&Poset::discrete(2)), Err(Error::NotDirectedPoset));
        let d4 = bar_index(&fixtures::d4_poset()).unwrap();
        assert_eq!(d4.lub(ElemSet::full(4)), Some(3));
    }

    #[test]
    fn laws_on_chains() {
        let r = ccc_laws(&c2_full(), &c2_full(), &c2_full()).unwrap();
        assert!(r.all_hold(), "{:?}", r.failures);
        assert!(r.codomain_s10);
        let one = terminal(Mode::Directed);
        let r = ccc_laws(&one, &c2_full(), &one).unwrap();
        assert!(r.all_hold(), "{:?}", r.failures);
    }

    #[test]
    fn eval_continuity_matches_listed_product() {
        let small = small_dlubpos(3).unwrap();
        let mut compared = 0;
        for d in &small {
            for e in &small {
                let Ok(fs) = pointwise_exp(d, e) else { continue };
                if fs.maps().len() * d.size() > 12 {
                    continue;
                }
                let Ok(fd) = product(fs.to_lubpo(), d) else { continue };
                let eval = fs.eval_map(&fd);
                assert_eq!(
                    fs.eval_is_continuous(),
                    is_continuous(&eval, &fd.lubpo, e),
                    "{}\n{}",
                    crate::format::serialize(d),
                    crate::format::serialize(e)
                );
                compared += 1;
            }
        }
        assert!(compared > 10);
    }

    #[test]
    fn curry_search_on_tiny_orders() {
        let r = curry_discontinuity_search(1).unwrap();
        assert_eq!(r.triples, 1);
        assert!(r.witnesses.is_empty());
    }
}
