"""Published reference numbers used by ``verify`` and the acceptance tests.

Values are stored as strings so that no digit is lost to binary floats.
"""

# zero temperature spectra of D(n), keyed by n and then by 2j; listed values
# are rounded to 1e-11 and small eigenvalues are truncated
SPECTRA_ZERO = {
    2: {0: ["0.69314718056"], 2: ["0.10228427315"]},
    3: {1: ["0.450771338685", "0.03398034507"], 3: ["0.007624158125"]},
    4: {
        0: ["0.61451589297", "0.00365561121"],
        2: ["0.12071380424", "0.00552473720", "0.00069384043"],
        4: ["0.000206270047"],
    },
    5: {
        1: ["0.42478947699", "0.04837782416", "0.00132787973", "0.00016215953", "0.00002079330"],
        3: ["0.01220782094", "0.00041374155", "0.00003079567", "5.55739e-6"],
        5: ["2.01173e-6"],
    },
    6: {
        0: ["0.57225072096", "0.00689732739", "0.00012390859", "0.00001153518", "2.1124e-7"],
        2: ["0.12810808044", "0.00963410772", "0.00146363784", "0.00020810707", "0.00003475259",
            "2.69435e-6", "1.59341e-6", "2.7386e-7", "5.023e-8"],
        4: ["0.00045834467", "0.00001216336", "6.7394e-7", "7.206e-8", "1.690e-8"],
        6: ["7.07e-9"],
    },
}

SPECTRA_TOLERANCE = "1e-11"

ENTROPY_ZERO = {
    2: "0.95367162656978945738557",
    3: "1.09690078367655639608404",
    4: "1.19547447383418925567332",
    5: "1.27102739309231825158036",
    6: "1.33247760568637557112695",
    7: "1.38430489902101253089084",
    8: "1.42913854287157243504956",
    9: "1.46864496929391162170464",
    10: "1.50396085818734543200735",
}

EFP_ZERO = {
    2: "0.102284273146684897",
    3: "0.00762415812490254761",
    4: "0.000206270046519527063",
    5: "2.01172595898884905e-6",
    6: "7.06812753309203896e-9",
    7: "8.93090684226941650e-12",
    8: "4.05749505255338289e-15",
    9: "6.62359212493539014e-19",
    10: "3.88481154904260358e-23",
}

# smoothed EFP amplitude estimates keyed by the last n of the window
EFP_AMPLITUDE = {10: "0.8412645021372811", 9: "0.8412642481617325"}

# s(n, T) - s(n, 0) at n = 8, keyed by nT
THERMAL_ENTROPY_8 = {"0.50": "0.01367551758", "2.00": "0.204265775830"}
THERMAL_TOLERANCE_8 = {"0.50": "1e-8", "2.00": "1e-6"}

# (1/3) log(sinh(nT)/nT) for a few nT
CFT_THERMAL = {"0.05": "0.00013887732", "0.50": "0.013774951538", "1.00": "0.053813120524",
               "2.00": "0.19840673068"}

DIM_H_10 = 12041
IRREDUCIBLE_WORDS_10 = 50354
INVARIANT_DIM_10 = 4286
DIM_M1_10 = 90
DIM_V_10 = 1141
EQUATIONS_10 = 1307
