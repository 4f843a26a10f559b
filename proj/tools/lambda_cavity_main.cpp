// Command-line front end. Talks to the library exclusively through the
// C interface in lambda_cavity.h.

#include "lambda_cavity.h"

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static void usage(FILE* out)
{
    fprintf(out,
            "usage: lambda-cavity <mode> [--config <path>] [--out <path>] [--set key=value ...]\n"
            "\n"
            "modes:\n"
            "  steady     steady-state observables at one detuning (CSV)\n"
            "  sweep      steady-state observables over delta_grid (CSV)\n"
            "  spectrum   probe absorption over omega_grid, with and without\n"
            "             the cross-damping terms (CSV)\n"
            "  trap       time series of the S/A-basis populations (CSV)\n"
            "  validate   run the acceptance checks, write a JSON report\n"
            "\n"
            "options:\n"
            "  --config <path>   key = value file ('#' comments); defaults apply\n"
            "                    when omitted\n"
            "  --out <path>      output file (default: <mode>.csv or\n"
            "                    validation_report.json)\n"
            "  --set key=value   override one config key; repeatable\n"
            "\n"
            "exit codes: 0 ok, 2 config error, 3 solver error, 4 validation\n"
            "failure, 5 output I/O error\n");
}

static char* read_file(const char* path)
{
    FILE* f = fopen(path, "rb");
    if (!f)
        return NULL;
    fseek(f, 0, SEEK_END);
    long size = ftell(f);
    fseek(f, 0, SEEK_SET);
    if (size < 0) {
        fclose(f);
        return NULL;
    }
    char* text = (char*)malloc((size_t)size + 1);
    if (!text) {
        fclose(f);
        return NULL;
    }
    size_t got = fread(text, 1, (size_t)size, f);
    fclose(f);
    text[got] = '\0';
    return text;
}

int main(int argc, char** argv)
{
    if (argc < 2) {
        usage(stderr);
        return LMC_ERR_CONFIG;
    }
    if (strcmp(argv[1], "--help") == 0 || strcmp(argv[1], "-h") == 0) {
        usage(stdout);
        return LMC_OK;
    }

    const char* mode = argv[1];
    const char* config_path = NULL;
    const char* out_path = NULL;

    lmc_run_config* config = lmc_config_new();
    lmc_status status = LMC_OK;

    /* first pass: locate --config so file values precede --set overrides */
    for (int i = 2; i < argc; ++i) {
        if (strcmp(argv[i], "--config") == 0 && i + 1 < argc)
            config_path = argv[++i];
        else if (strcmp(argv[i], "--out") == 0 && i + 1 < argc)
            out_path = argv[++i];
    }

    if (config_path) {
        char* text = read_file(config_path);
        if (!text) {
            fprintf(stderr, "error: cannot read config file '%s'\n", config_path);
            lmc_config_free(config);
            return LMC_ERR_CONFIG;
        }
        status = lmc_config_load(config, text);
        free(text);
        if (status != LMC_OK) {
            fprintf(stderr, "error: %s\n", lmc_last_error());
            lmc_config_free(config);
            return status;
        }
    }

    for (int i = 2; i < argc; ++i) {
        if (strcmp(argv[i], "--config") == 0 || strcmp(argv[i], "--out") == 0) {
            ++i;
            continue;
        }
        if (strcmp(argv[i], "--set") == 0 && i + 1 < argc) {
            char* pair = argv[++i];
            char* eq = strchr(pair, '=');
            if (!eq) {
                fprintf(stderr, "error: --set expects key=value, got '%s'\n", pair);
                lmc_config_free(config);
                return LMC_ERR_CONFIG;
            }
            *eq = '\0';
            status = lmc_config_set(config, pair, eq + 1);
            *eq = '=';
            if (status != LMC_OK) {
                fprintf(stderr, "error: %s\n", lmc_last_error());
                lmc_config_free(config);
                return status;
            }
        } else {
            fprintf(stderr, "error: unknown argument '%s'\n", argv[i]);
            usage(stderr);
            lmc_config_free(config);
            return LMC_ERR_CONFIG;
        }
    }

    /* the positional mode always wins over file values and overrides */
    status = lmc_config_set(config, "mode", mode);
    if (status != LMC_OK) {
        fprintf(stderr, "error: %s\n", lmc_last_error());
        lmc_config_free(config);
        return status;
    }

    status = lmc_run(config, out_path);
    if (status != LMC_OK && status != LMC_ERR_VALIDATION)
        fprintf(stderr, "error: %s\n", lmc_last_error());
    lmc_config_free(config);
    return status;
}
