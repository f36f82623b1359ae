#include <gtest/gtest.h>

#include <json.hpp>

#include "qkgp/error.hpp"
#include "qkgp/gram_io.hpp"
#include "qkgp/tasks.hpp"
#include "temp_dir.hpp"

using namespace qkgp;

TEST(GramIo, RoundTripIsExact) {
    TempDir dir;
    kernels::GramMatrix g;
    g.values = Eigen::MatrixXd::Random(6, 6);
    g.values = (g.values + g.values.transpose()).eval();
    g.values(0, 1) = 1.0 / 3.0;
    g.values(1, 0) = 1e-300;
    kernels::save_gram(g, dir / "g.csv");
    const auto back = kernels::load_gram(dir / "g.csv");
    EXPECT_EQ(back.values, g.values);
    EXPECT_EQ(back.provenance, kernels::Provenance::Ingested);
}

TEST(GramIo, SidecarNextToValues) {
    TempDir dir;
    kernels::GramMatrix g;
    g.values = Eigen::MatrixXd::Identity(3, 3);
    g.provenance = kernels::Provenance::ShotEmulated;
    kernels::save_gram(g, dir / "gram.csv", {2.0, "C-8", {2.0, {1.5}, {}, 0.0}});
    EXPECT_EQ(kernels::sidecar_path(dir / "gram.csv"), dir / "gram.json");
    const auto meta = nlohmann::json::parse(slurp(dir / "gram.json"));
    EXPECT_EQ(meta["provenance"], "shot_emulated");
    EXPECT_EQ(meta["family"], "C-8");
    EXPECT_EQ(meta["n"], 3);
    EXPECT_DOUBLE_EQ(meta["hyperparams"]["c"][0].get<double>(), 1.5);
}

TEST(GramIo, RejectsMalformedFiles) {
    TempDir dir;
    spit(dir / "ragged.csv", "1,2\n3\n");
    spit(dir / "text.csv", "1,x\n3,4\n");
    spit(dir / "rect.csv", "1,2,3\n4,5,6\n");
    spit(dir / "empty.csv", "");
    for (const char* f : {"ragged.csv", "text.csv", "rect.csv", "empty.csv", "missing.csv"}) {
        EXPECT_THROW(kernels::load_gram(dir / f), IoError) << f;
    }
    EXPECT_THROW(kernels::save_gram(kernels::GramMatrix{}, dir / "no" / "such" / "dir.csv"), IoError);
}

TEST(DatasetIo, RoundTrip) {
    TempDir dir;
    gp::Dataset d;
    d.x = kernels::Points{{0.1, -2.0}, {1.0 / 7.0, 3.5}};
    d.y = Eigen::Vector2d{0.25, -1e-9};
    d.sigma2 = Eigen::Vector2d{0.5, 0.0};
    tasks::write_dataset_csv(d, dir / "d.csv");
    EXPECT_EQ(slurp(dir / "d.csv").substr(0, 16), "x1,x2,y,sigma2\n0");
    const auto back = tasks::read_dataset_csv(dir / "d.csv");
    EXPECT_EQ(back.x, d.x);
    EXPECT_EQ(back.y, d.y);
    EXPECT_EQ(back.sigma2, d.sigma2);
}

TEST(DatasetIo, RejectsBadInput) {
    TempDir dir;
    spit(dir / "hdr.csv", "a,b\n1,2\n");
    spit(dir / "short.csv", "x1,y,sigma2\n1,2\n");
    spit(dir / "neg.csv", "x1,y,sigma2\n1,2,-1\n");
    EXPECT_THROW(tasks::read_dataset_csv(dir / "missing.csv"), IoError);
    EXPECT_THROW(tasks::read_dataset_csv(dir / "hdr.csv"), Error);
    EXPECT_THROW(tasks::read_dataset_csv(dir / "short.csv"), Error);
    EXPECT_THROW(tasks::read_dataset_csv(dir / "neg.csv"), Error);
}
