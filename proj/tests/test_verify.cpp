#include <gtest/gtest.h>

#include <set>

#include "codegraph/verify.hpp"

namespace codegraph {
namespace {

const TheoremContext& ctx4() {
  static const TheoremContext ctx(4);
  return ctx;
}

const EmbeddingList& all4() {
  static const EmbeddingList list = enumerate_embeddings(ctx4());
  return list;
}

const RestrictionIndex& index4() {
  static const RestrictionIndex index(ctx4());
  return index;
}

std::vector<VertexId> restriction_of(const TheoremContext& ctx, const GraphAutomorphism& a) {
  std::vector<VertexId> out;
  for (const auto& x : ctx.codes().vertices()) out.push_back(*ctx.grassmann().index_of(apply(a, x)));
  return out;
}

GraphAutomorphism sample_element(int n, std::size_t skip) {
  std::optional<GraphAutomorphism> found;
  std::size_t i = 0;
  GrassmannAutGroup(n, 2, 2).for_each([&](const GraphAutomorphism& a) {
    if (i++ == skip) found = a;
    return !found;
  });
  return *found;
}

TEST(Context, Shapes) {
  const auto& ctx = ctx4();
  EXPECT_EQ(ctx.codes().size(), 13u);
  EXPECT_EQ(ctx.grassmann().size(), 35u);
  EXPECT_EQ(ctx.g1_domain().size(), 5u);  // Q and the four P_I with |I| = 3
  EXPECT_EQ(ctx.star_members(0).size(), 7u);
  for (std::uint32_t b = 1; b <= ctx.lower_mask(); ++b)
    EXPECT_TRUE(ctx.codes().vertex(ctx.a_index(b)).contains(ctx.frame().Q()));
  EXPECT_EQ(ctx.s_canonical(ctx.lower_mask()).dim(), 4);
}

TEST(Enumerate, CountAndSoundness) {
  const auto& list = all4();
  EXPECT_TRUE(list.complete);
  EXPECT_EQ(list.maps.size(), 80640u);
  std::set<std::vector<VertexId>> distinct(list.maps.begin(), list.maps.end());
  EXPECT_EQ(distinct.size(), list.maps.size());
  for (const auto& m : list.maps) ASSERT_TRUE(embedding_is_valid(ctx4(), m));
}

TEST(Enumerate, ContainsIdentityHAndEveryGroupImage) {
  const auto& ctx = ctx4();
  const std::set<std::vector<VertexId>> found(all4().maps.begin(), all4().maps.end());
  EXPECT_TRUE(found.count(ctx.identity_images()));
  EXPECT_TRUE(found.count(ctx.h_images()));
  std::size_t restrictions = 0, composed = 0;
  GrassmannAutGroup(4, 2, 2).for_each([&](const GraphAutomorphism& a) {
    restrictions += found.count(restriction_of(ctx, a));
    std::vector<VertexId> gh;
    for (VertexId v = 0; v < ctx.codes().size(); ++v) gh.push_back(*ctx.grassmann().index_of(apply(a, ctx.h_subspace(v))));
    composed += found.count(gh);
    return true;
  });
  EXPECT_EQ(restrictions, 40320u);
  EXPECT_EQ(composed, 40320u);
}

TEST(Enumerate, OrderDoesNotChangeTheSet) {
  const auto& ctx = ctx4();
  std::vector<std::size_t> reversed(ctx.codes().size());
  for (std::size_t i = 0; i < reversed.size(); ++i) reversed[i] = reversed.size() - i;
  for (bool dynamic : {false, true}) {
    EnumerationOptions opts;
    opts.tie_rank = reversed;
    opts.smallest_domain_first = dynamic;
    auto other = enumerate_embeddings(ctx, opts);
    auto a = all4().maps;
    std::sort(a.begin(), a.end());
    std::sort(other.maps.begin(), other.maps.end());
    EXPECT_EQ(a, other.maps);
  }
}

TEST(Enumerate, JobsGiveIdenticalStream) {
  EnumerationOptions opts;
  opts.jobs = 3;
  auto three = enumerate_embeddings(ctx4(), opts);
  EXPECT_EQ(three.maps, all4().maps);
}

TEST(Enumerate, BudgetMarksPartial) {
  const TheoremContext ctx(5);
  EnumerationOptions opts;
  opts.budget_secs = 0.2;
  const auto list = enumerate_embeddings(ctx, opts);
  EXPECT_FALSE(list.complete);
  for (const auto& m : list.maps) EXPECT_TRUE(embedding_is_valid(ctx, m));
  EXPECT_THROW(enumerate_embeddings(ctx), OutOfRange);
}

TEST(OrbitPrefixes, WeightsCoverEveryEmbedding) {
  const auto& ctx = ctx4();
  const MorphismSearch search(ctx.codes(), ctx.grassmann());
  for (std::size_t depth : {1, 2, 4}) {
    const auto prefixes = orbit_prefixes(ctx, search.order(), depth);
    std::uint64_t weighted = 0;
    for (const auto& p : prefixes) {
      std::uint64_t c = 0;
      search.run_prefix(p.images, [&](const std::vector<VertexId>&) {
        ++c;
        return true;
      });
      weighted += c * p.weight;
    }
    EXPECT_EQ(weighted, 80640u) << depth;
  }
}

TEST(Normalize, HIsAlreadyNormal) {
  const auto& ctx = ctx4();
  const auto norm = normalize(ctx, ctx.h_images());
  ASSERT_TRUE(norm.ok);
  EXPECT_FALSE(norm.dual_correction);
  EXPECT_EQ(norm.normalized, ctx.h_images());
  EXPECT_TRUE(acts_equal(norm.pre_g, GraphAutomorphism::identity(FieldSpec(2), 4), ctx.grassmann().vertices()));
}

TEST(Normalize, RestrictionBecomesIdentity) {
  const auto& ctx = ctx4();
  for (std::size_t skip : {0u, 17u, 5000u, 40319u}) {
    const auto a = sample_element(4, skip);
    const auto f = restriction_of(ctx, a);
    const auto norm = normalize(ctx, f);
    ASSERT_TRUE(norm.ok);
    EXPECT_EQ(norm.dual_correction, a.dual);
    EXPECT_EQ(norm.normalized, ctx.identity_images());
    EXPECT_TRUE(acts_equal(inverse(norm.pre_g), a, ctx.grassmann().vertices()));
    // f'(A_i) = g1(Q) + g1(P^i) before the linear step.
    const auto rep = lemma_chain(ctx, norm);
    EXPECT_EQ(rep.get("a_image_is_q_plus_p").status, LemmaStatus::Passed);
  }
}

TEST(LemmaChain, IdentityAndH) {
  for (int n : {4, 5}) {
    const TheoremContext ctx(n);
    const auto id = lemma_chain(ctx, normalize(ctx, ctx.identity_images()));
    EXPECT_TRUE(id.all_passed()) << n;
    EXPECT_TRUE(id.is_identity);
    EXPECT_TRUE(id.local_identity);

    const auto h = lemma_chain(ctx, normalize(ctx, ctx.h_images()));
    EXPECT_TRUE(h.all_passed()) << n;
    EXPECT_TRUE(h.is_h);
    // h is not the identity on any C_I with |I| = 3.
    EXPECT_FALSE(h.local_identity) << n;
  }
}

// P^n ⊂ H exactly for odd n; for h, g1(P^n) = P_n when n is even and P^n
// when n is odd.
TEST(LemmaChain, ParityOfPn) {
  for (int n : {4, 5, 6}) {
    const TheoremContext ctx(n);
    EXPECT_EQ(ctx.frame().in_h(p_upper(SupportSet{n}, n)), n % 2 == 1);
    const auto norm = normalize(ctx, ctx.h_images());
    const auto& g = norm.g1_after.at(ctx.p_upper_index(n));
    ASSERT_TRUE(g.has_value());
    EXPECT_EQ(*g, n % 2 == 0 ? p_point(SupportSet{n}, n) : p_upper(SupportSet{n}, n));
    EXPECT_EQ(lemma_chain(ctx, norm).get("parity").status, LemmaStatus::Passed);
  }
}

TEST(LemmaChain, EveryEmbeddingAtFour) {
  const auto& ctx = ctx4();
  std::size_t ident = 0, hh = 0;
  for (const auto& f : all4().maps) {
    const auto rep = lemma_chain(ctx, normalize(ctx, f));
    ASSERT_TRUE(rep.all_passed());
    ident += rep.is_identity;
    hh += rep.is_h;
  }
  EXPECT_EQ(ident, 40320u);
  EXPECT_EQ(hh, 40320u);
}

TEST(Classify, HIsExceptionalWithIdentity) {
  const auto& ctx = ctx4();
  for (const RestrictionIndex* idx : {&index4(), static_cast<const RestrictionIndex*>(nullptr)}) {
    const auto v = classify(ctx, ctx.h_images(), idx);
    ASSERT_EQ(v.kind, VerdictKind::Exceptional);
    EXPECT_TRUE(acts_equal(*v.witness, GraphAutomorphism::identity(FieldSpec(2), 4), ctx.grassmann().vertices()));
  }
  EXPECT_EQ(index4().restriction(ctx.h_images()), nullptr);
}

TEST(Classify, RestrictionIsExtendableWithThatElement) {
  const auto& ctx = ctx4();
  for (std::size_t skip : {3u, 999u, 30000u}) {
    const auto a = sample_element(4, skip);
    for (const RestrictionIndex* idx : {&index4(), static_cast<const RestrictionIndex*>(nullptr)}) {
      const auto v = classify(ctx, restriction_of(ctx, a), idx);
      ASSERT_EQ(v.kind, VerdictKind::Extendable);
      EXPECT_TRUE(acts_equal(*v.witness, a, ctx.grassmann().vertices()));
    }
  }
}

TEST(Classify, NonEmbeddingIsUnclassified) {
  const auto& ctx = ctx4();
  auto f = ctx.identity_images();
  std::swap(f[0], f[5]);
  EXPECT_EQ(classify(ctx, f, &index4()).kind, VerdictKind::Unclassified);
  EXPECT_EQ(classify(ctx, f).kind, VerdictKind::Unclassified);
}

TEST(Classify, WitnessesAreUniqueAtFour) {
  EXPECT_EQ(index4().distinct_restrictions(), 40320u);
  EXPECT_EQ(index4().distinct_exceptional(), 40320u);
}

TEST(Certificate, FourExhaustive) {
  const auto c = certify_theorem(4);
  EXPECT_TRUE(c.complete);
  EXPECT_TRUE(c.holds());
  EXPECT_TRUE(c.lemma_chain_clean());
  EXPECT_EQ(c.embeddings_total, 80640u);
  EXPECT_EQ(c.extendable, 40320u);
  EXPECT_EQ(c.exceptional, 40320u);
  EXPECT_EQ(c.unclassified, 0u);
  EXPECT_EQ(c.max_witness_multiplicity, 1u);
  EXPECT_EQ(c.group.group_order, 40320u);
  EXPECT_EQ(c.group.codes_stabilizer, 1u);
  EXPECT_EQ(c.group.h_image_stabilizer, 1u);
  EXPECT_EQ(c.group.h_extensions, 0u);

  CertifyOptions reduced;
  reduced.enumeration.symmetry_depth = 3;
  const auto r = certify_theorem(4, reduced);
  EXPECT_EQ(r.embeddings_total, c.embeddings_total);
  EXPECT_EQ(r.extendable, c.extendable);
  EXPECT_EQ(r.exceptional, c.exceptional);
  EXPECT_LT(r.leaves_searched, c.leaves_searched);
  for (const auto& name : {"a_images_in_s", "s_is_canonical", "restriction_embeds", "endgame"}) EXPECT_EQ(r.lemma_chain.at(name).passed, c.lemma_chain.at(name).passed);
}

TEST(Certificate, JobsDoNotChangeCounts) {
  CertifyOptions one, three;
  three.enumeration.jobs = 3;
  const auto a = certify_theorem(4, one), b = certify_theorem(4, three);
  EXPECT_EQ(a.embeddings_total, b.embeddings_total);
  EXPECT_EQ(a.extendable, b.extendable);
  EXPECT_EQ(a.exceptional, b.exceptional);
  EXPECT_EQ(a.dual_corrections, b.dual_corrections);
  for (const auto& [name, t] : a.lemma_chain) EXPECT_EQ(t.passed, b.lemma_chain.at(name).passed);
}

TEST(Certificate, FiveByOrbits) {
  CertifyOptions opts;
  opts.enumeration.symmetry_depth = 8;
  const auto c = certify_theorem(5, opts);
  EXPECT_TRUE(c.complete);
  EXPECT_TRUE(c.holds());
  EXPECT_TRUE(c.lemma_chain_clean());
  EXPECT_EQ(c.embeddings_total, 2u * 9999360u);
  EXPECT_EQ(c.extendable, 9999360u);
  EXPECT_EQ(c.exceptional, 9999360u);
  EXPECT_EQ(c.group.codes_stabilizer, 1u);
  EXPECT_EQ(c.group.h_image_stabilizer, 1u);
  EXPECT_EQ(c.group.h_extensions, 0u);
}

}  // namespace
}  // namespace codegraph
