#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "scn/image_io.hpp"
#include "scn/manifest.hpp"
#include "scn/restorer.hpp"
#include "scn/synthetic.hpp"
#include "scn/tinynet.hpp"
#include "scn/trainer.hpp"
#include "test_support.hpp"

using namespace scn;
using namespace scn::test;

namespace {

int run_cli(const std::string& args, const std::string& redirect = " > /dev/null 2>&1") {
    const std::string cmd = std::string(SCN_CLI_PATH) + " " + args + redirect;
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("degrade command") {
    TempDir tmp("scn-cli");
    const Image tex = make_texture(1, 24, 24);
    const std::string input = tmp.file("in.pgm");
    save_pgm(tex, input);

    SUBCASE("sigma 0 output is the raw encoding of the input") {
        const std::string out = tmp.file("out.f32");
        REQUIRE(run_cli("degrade --input " + input + " --sigma 0 --seed 5 --output " + out) == 0);
        const std::string reference = tmp.file("ref.f32");
        save_raw_f32(load_pgm(input), reference);
        CHECK(read_file(out) == read_file(reference));
    }
    SUBCASE("identical invocations produce hash-equal outputs") {
        const std::string a = tmp.file("a.f32");
        const std::string b = tmp.file("b.f32");
        REQUIRE(run_cli("degrade --input " + input + " --sigma 30 --seed 9 --output " + a) == 0);
        REQUIRE(run_cli("degrade --input " + input + " --sigma 30 --seed 9 --output " + b) == 0);
        CHECK(fnv1a64_file(a) == fnv1a64_file(b));
    }
    SUBCASE("scale path crops and writes previews") {
        const std::string out = tmp.file("lr.f32");
        REQUIRE(run_cli("degrade --input " + input + " --scale 2 --output " + out) == 0);
        const Image result = load_raw_f32(out);
        CHECK(result.height == 24);
        CHECK(std::filesystem::exists(tmp.file("lr.pgm")));
        CHECK(std::filesystem::exists(out + ".manifest"));
    }
    SUBCASE("--sigma with --scale is a usage error") {
        CHECK(run_cli("degrade --input " + input + " --sigma 30 --scale 2 --output " +
                      tmp.file("x.f32")) == 2);
    }
    SUBCASE("neither --sigma nor --scale is a usage error") {
        CHECK(run_cli("degrade --input " + input + " --output " + tmp.file("x.f32")) == 2);
    }
    SUBCASE("missing input file is an I/O error") {
        CHECK(run_cli("degrade --input " + tmp.file("ghost.pgm") + " --sigma 1 --output " +
                      tmp.file("x.f32")) == 3);
    }
}

TEST_CASE("train command") {
    TempDir tmp("scn-cli");
    const std::string data = tmp.dir() + "/data";
    std::filesystem::create_directories(data);
    for (int i = 0; i < 3; ++i)
        save_pgm(make_texture(40 + static_cast<std::uint64_t>(i), 32, 32),
                 data + "/t" + std::to_string(i) + ".pgm");

    SUBCASE("epochs 0 writes exactly the seeded init") {
        const std::string model = tmp.file("m0.scnw");
        REQUIRE(run_cli("train --data-dir " + data + " --out-model " + model +
                        " --seed 11 --epochs 0") == 0);
        const std::string reference = tmp.file("ref.scnw");
        save_weights(init_weights(11, default_architecture()), reference);
        CHECK(read_file(model) == read_file(reference));
    }
    SUBCASE("repeated runs are hash-equal; augmentation changes the stream") {
        const std::string args =
            " --data-dir " + data + " --seed 4 --epochs 1 --patches 16 --patch-size 9";
        const std::string m1 = tmp.file("m1.scnw");
        const std::string m2 = tmp.file("m2.scnw");
        const std::string m3 = tmp.file("m3.scnw");
        REQUIRE(run_cli("train" + args + " --out-model " + m1) == 0);
        REQUIRE(run_cli("train" + args + " --out-model " + m2) == 0);
        REQUIRE(run_cli("train" + args + " --augment-fr --out-model " + m3) == 0);
        CHECK(fnv1a64_file(m1) == fnv1a64_file(m2));
        CHECK(fnv1a64_file(m1) != fnv1a64_file(m3));
    }
    SUBCASE("empty data dir is a validation error") {
        const std::string empty = tmp.dir() + "/empty";
        std::filesystem::create_directories(empty);
        CHECK(run_cli("train --data-dir " + empty + " --out-model " + tmp.file("x.scnw")) == 4);
    }
}

TEST_CASE("restore command") {
    TempDir tmp("scn-cli");
    const Image tex = make_texture(2, 20, 20);
    const std::string input = tmp.file("in.f32");
    save_raw_f32(tex, input);

    SUBCASE("committee none equals the direct restorer output") {
        const std::string out = tmp.file("none.f32");
        REQUIRE(run_cli("restore --input " + input + " --filter gauss3 --committee none "
                        "--output " + out) == 0);
        const ConvFilterRestorer gauss(
            3, 3,
            {1 / 16.0, 2 / 16.0, 1 / 16.0, 2 / 16.0, 4 / 16.0, 2 / 16.0, 1 / 16.0, 2 / 16.0,
             1 / 16.0});
        const std::string reference = tmp.file("ref.f32");
        save_raw_f32(gauss.restore(load_raw_f32(input)), reference);
        CHECK(read_file(out) == read_file(reference));
    }
    SUBCASE("fr dumps exactly 8 member files, full exactly 16") {
        const std::string out_fr = tmp.file("fr.f32");
        REQUIRE(run_cli("restore --input " + input + " --filter shift --committee fr "
                        "--dump-members --output " + out_fr) == 0);
        int fr_members = 0, full_members = 0;
        for (const auto& e : std::filesystem::directory_iterator(tmp.dir()))
            if (e.path().filename().string().find("fr.member") == 0) ++fr_members;
        CHECK(fr_members == 8);

        const std::string out_full = tmp.file("full.f32");
        REQUIRE(run_cli("restore --input " + input + " --filter shift --committee full "
                        "--dump-members --output " + out_full) == 0);
        for (const auto& e : std::filesystem::directory_iterator(tmp.dir()))
            if (e.path().filename().string().find("full.member") == 0) ++full_members;
        CHECK(full_members == 16);
    }
    SUBCASE("scn-l on a constant image warns and falls back") {
        Image flat(8, 8);
        for (double& v : flat.data) v = 0.5;
        const std::string const_input = tmp.file("flat.f32");
        save_raw_f32(flat, const_input);
        const std::string err_log = tmp.file("stderr.txt");
        REQUIRE(run_cli("restore --input " + const_input + " --filter gauss3 --committee l "
                        "--output " + tmp.file("l.f32"),
                        " > /dev/null 2> " + err_log) == 0);
        CHECK(read_file(err_log).find("warning") != std::string::npos);
        const Manifest m = Manifest::load(tmp.file("l.f32") + ".manifest");
        CHECK(m.get("members") == "1");
        CHECK(m.get("scn_l_fallback") == "1");
    }
    SUBCASE("model and filter together are rejected") {
        CHECK(run_cli("restore --input " + input + " --filter gauss3 --model x.scnw "
                      "--committee none --output " + tmp.file("x.f32")) == 4);
    }
}

TEST_CASE("evaluate command") {
    TempDir tmp("scn-cli");
    const std::string clean = tmp.dir() + "/clean";
    const std::string degraded = tmp.dir() + "/degraded";
    std::filesystem::create_directories(clean);
    std::filesystem::create_directories(degraded);
    for (int i = 0; i < 3; ++i) {
        const std::string name = "img" + std::to_string(i);
        const Image tex = make_texture(60 + static_cast<std::uint64_t>(i), 16, 16);
        save_pgm(tex, clean + "/" + name + ".pgm");
        REQUIRE(run_cli("degrade --input " + clean + "/" + name + ".pgm --sigma 25 --seed " +
                        std::to_string(70 + i) + " --output " + degraded + "/" + name + ".f32") ==
                0);
    }

    SUBCASE("none-only table has an all-zero ipsnr column") {
        const std::string csv = tmp.file("none.csv");
        REQUIRE(run_cli("evaluate --clean-dir " + clean + " --degraded-dir " + degraded +
                        " --filter gauss3 --committees none --setting sigma25 --out " + csv) == 0);
        const std::string text = read_file(csv);
        CHECK(text.find("image,setting,committee,psnr_f32,psnr_u8,ipsnr_u8\n") == 0);
        CHECK(count_lines(text) == 1 + 3 + 1);  // header + rows + average
        std::istringstream lines(text);
        std::string line;
        std::getline(lines, line);  // header
        while (std::getline(lines, line))
            CHECK(line.substr(line.rfind(',') + 1) == "0.000000");
    }
    SUBCASE("row count is images x committees plus one average per committee") {
        const std::string csv = tmp.file("multi.csv");
        REQUIRE(run_cli("evaluate --clean-dir " + clean + " --degraded-dir " + degraded +
                        " --filter gauss3 --committees none,f,fr --out " + csv) == 0);
        CHECK(count_lines(read_file(csv)) == 1 + 3 * 3 + 3);
    }
    SUBCASE("missing degraded counterpart is a validation error") {
        save_pgm(make_texture(99, 16, 16), clean + "/extra.pgm");
        CHECK(run_cli("evaluate --clean-dir " + clean + " --degraded-dir " + degraded +
                      " --filter gauss3 --committees none --out " + tmp.file("x.csv")) == 4);
    }
}

TEST_CASE("features command") {
    TempDir tmp("scn-cli");

    // Single 1x1 identity layer: the layer-1 feature map is the min-max
    // normalized input.
    NetworkWeights w;
    Layer l;
    l.out_ch = 1;
    l.in_ch = 1;
    l.kh = 1;
    l.kw = 1;
    l.activation = Activation::linear;
    l.weights = {1.0f};
    l.bias = {0.0f};
    w.residual_mode = false;
    w.layers.push_back(l);
    const std::string model = tmp.file("id.scnw");
    save_weights(w, model);

    const Image img = random_image(5, 12, 12);
    const std::string input = tmp.file("in.f32");
    save_raw_f32(img, input);

    SUBCASE("dumped channel count equals out_ch and maps match in-process dumps") {
        const std::string outdir = tmp.dir() + "/feats";
        REQUIRE(run_cli("features --input " + input + " --model " + model +
                        " --layer 1 --outdir " + outdir) == 0);
        int pgms = 0;
        for (const auto& e : std::filesystem::directory_iterator(outdir))
            if (e.path().extension() == ".pgm") ++pgms;
        CHECK(pgms == 1);

        const auto maps = dump_features(w, load_raw_f32(input), 1);
        const std::string reference = tmp.file("ref.pgm");
        save_pgm(maps[0].map, reference);
        CHECK(read_file(outdir + "/feat_layer1_ch00.pgm") == read_file(reference));
    }
    SUBCASE("bad layer index is a validation error") {
        CHECK(run_cli("features --input " + input + " --model " + model +
                      " --layer 99 --outdir " + tmp.dir() + "/x") == 4);
    }
}

TEST_CASE("rerun reproduces hash-equal outputs") {
    TempDir tmp("scn-cli");
    const std::string input = tmp.file("in.pgm");
    save_pgm(make_texture(7, 24, 24), input);
    const std::string out = tmp.file("noisy.f32");
    REQUIRE(run_cli("degrade --input " + input + " --sigma 25 --seed 21 --output " + out) == 0);
    CHECK(run_cli("rerun " + out + ".manifest") == 0);

    // Tamper with the output; rerun must repair and still verify.
    std::ofstream(out, std::ios::binary) << "corrupted";
    CHECK(run_cli("rerun " + out + ".manifest") == 0);
}

TEST_CASE("usage errors") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("degrade") == 2);  // missing required options
}
