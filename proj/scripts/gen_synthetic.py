#!/usr/bin/env python3
"""Generate the bundled synthetic dataset in data/synthetic/.

Coordinates are approximate real locations; every probability, mass, sales
figure and manufacturer name is invented. Output is deterministic.
"""

import csv
import json
import math
import os
import sys

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "synthetic")

# id, name, region, lat, lon, roles
NODES = [
    # extraction
    ("AU_GREENBUSHES", "Greenbushes", "AU", -33.86, 116.06, "E"),
    ("AU_PILBARA", "Pilbara", "AU", -22.60, 117.80, "E"),
    ("AU_KAMBALDA", "Kambalda", "AU", -31.20, 121.70, "E"),
    ("AU_GROOTE", "Groote Eylandt", "AU", -14.00, 136.60, "E"),
    ("AU_WEIPA", "Weipa", "AU", -12.60, 141.90, "E"),
    ("CL_ATACAMA", "Salar de Atacama", "SA", -23.50, -68.20, "E"),
    ("CL_ESCONDIDA", "Escondida", "SA", -24.30, -69.10, "E"),
    ("AR_HOMBRE", "Hombre Muerto", "SA", -25.30, -67.00, "E"),
    ("BR_CARAJAS", "Carajas", "SA", -6.10, -50.20, "E"),
    ("BR_MINAS", "Minas Gerais", "SA", -16.00, -42.90, "E"),
    ("PE_ANTAMINA", "Antamina", "SA", -9.50, -77.00, "E"),
    ("CN_QINGHAI", "Qinghai", "CN", 36.60, 95.00, "E"),
    ("CN_HEILONGJIANG", "Heilongjiang", "CN", 45.80, 130.90, "E"),
    ("CN_YUNNAN", "Yunnan", "CN", 24.90, 102.80, "E"),
    ("CN_GUANGXI", "Guangxi", "CN", 23.10, 108.30, "E"),
    ("ID_SULAWESI", "Sulawesi", "ID", -2.50, 121.40, "E"),
    ("ID_HALMAHERA", "Halmahera", "ID", 0.60, 127.90, "E"),
    ("CD_KATANGA", "Katanga", "AF", -10.70, 25.50, "E"),
    ("ZA_KALAHARI", "Kalahari", "AF", -27.20, 22.90, "E"),
    ("GA_MOANDA", "Moanda", "AF", -1.50, 13.20, "E"),
    ("MZ_BALAMA", "Balama", "AF", -13.30, 38.70, "E"),
    ("MA_KHOURIBGA", "Khouribga", "AF", 32.90, -6.90, "E"),
    ("GN_BOKE", "Boke", "AF", 10.90, -14.30, "E"),
    ("CA_SUDBURY", "Sudbury", "NA", 46.50, -81.00, "E"),
    ("US_THACKER", "Thacker Pass", "NA", 41.70, -118.10, "E"),
    ("RU_NORILSK", "Norilsk", "OTHER", 69.30, 88.20, "E"),
    ("FI_KEMI", "Kemi", "EU", 65.70, 24.60, "E"),
    ("PT_BARROSO", "Barroso", "EU", 41.70, -7.80, "E"),
    # processing
    ("CN_JIANGXI", "Yichun refinery", "CN", 27.80, 114.40, "P"),
    ("CN_SICHUAN", "Sichuan refinery", "CN", 30.60, 104.10, "P"),
    ("CN_GUANGDONG", "Guangdong refinery", "CN", 23.40, 113.30, "P"),
    ("CN_SHANDONG", "Shandong smelter", "CN", 36.70, 117.00, "P"),
    ("AU_KWINANA", "Kwinana", "AU", -32.20, 115.80, "P"),
    ("CL_ANTOFAGASTA", "Antofagasta", "SA", -23.60, -70.40, "P"),
    ("ID_MOROWALI", "Morowali", "ID", -2.80, 122.10, "P"),
    ("FI_KOKKOLA", "Kokkola", "EU", 63.80, 23.10, "P"),
    ("DE_GUBEN", "Guben", "EU", 51.90, 14.70, "P"),
    ("US_RENO", "Reno refinery", "NA", 39.50, -119.80, "P"),
    ("KR_GWANGYANG", "Gwangyang", "KR", 34.90, 127.70, "P"),
    ("JP_NIIHAMA", "Niihama", "JP", 33.90, 133.30, "P"),
    # battery cells
    ("CN_NINGDE", "Ningde cells", "CN", 26.70, 119.50, "B"),
    ("CN_SHENZHEN", "Shenzhen cells", "CN", 22.50, 114.10, "B"),
    ("CN_CHANGZHOU", "Changzhou cells", "CN", 31.80, 119.90, "B"),
    ("KR_OCHANG", "Ochang cells", "KR", 36.70, 127.40, "B"),
    ("JP_OSAKA", "Osaka cells", "JP", 34.70, 135.50, "B"),
    ("US_SPARKS", "Sparks cells", "NA", 39.50, -119.40, "B"),
    ("US_TENNESSEE", "Tennessee cells", "NA", 35.90, -86.90, "B"),
    ("DE_ERFURT", "Erfurt cells", "EU", 50.98, 11.03, "B"),
    ("PL_WROCLAW", "Wroclaw cells", "EU", 51.10, 17.00, "B"),
    ("HU_DEBRECEN", "Debrecen cells", "EU", 47.50, 21.60, "B"),
    # vehicle assembly
    ("CN_SHANGHAI", "Shanghai assembly", "CN", 31.20, 121.50, "V"),
    ("CN_XIAN", "Xi'an assembly", "CN", 34.30, 108.90, "V"),
    ("CN_GUANGZHOU", "Guangzhou assembly", "CN", 23.10, 113.30, "V"),
    ("JP_TOYOTA", "Toyota City assembly", "JP", 35.10, 137.20, "V"),
    ("KR_ULSAN", "Ulsan assembly", "KR", 35.50, 129.30, "V"),
    ("IN_PUNE", "Pune assembly", "IN", 18.50, 73.90, "V"),
    ("DE_WOLFSBURG", "Wolfsburg assembly", "EU", 52.40, 10.80, "V"),
    ("DE_GRUENHEIDE", "Gruenheide assembly", "EU", 52.40, 13.80, "V"),
    ("FR_DOUAI", "Douai assembly", "EU", 50.40, 3.10, "V"),
    ("CZ_MLADA", "Mlada Boleslav assembly", "EU", 50.40, 14.90, "V"),
    ("US_FREMONT", "Fremont assembly", "NA", 37.50, -122.00, "V"),
    ("US_AUSTIN", "Austin assembly", "NA", 30.20, -97.60, "V"),
    ("US_DETROIT", "Detroit assembly", "NA", 42.30, -83.00, "V"),
    ("MX_MONTERREY", "Monterrey assembly", "NA", 25.70, -100.30, "V"),
    ("BR_CAMACARI", "Camacari assembly", "SA", -12.70, -38.30, "V"),
    # markets
    ("CN_BEIJING", "China north market", "CN", 39.90, 116.40, "M"),
    ("CN_CHENGDU", "China west market", "CN", 30.70, 104.10, "M"),
    ("CN_HANGZHOU", "China east market", "CN", 30.30, 120.20, "M"),
    ("JP_TOKYO", "Japan market", "JP", 35.70, 139.70, "M"),
    ("KR_SEOUL", "Korea market", "KR", 37.60, 127.00, "M"),
    ("IN_DELHI", "India market", "IN", 28.60, 77.20, "M"),
    ("AU_SYDNEY", "Australia market", "AU", -33.90, 151.20, "M"),
    ("DE_MUNICH", "Germany market", "EU", 48.10, 11.60, "M"),
    ("FR_PARIS", "France market", "EU", 48.90, 2.40, "M"),
    ("NL_AMSTERDAM", "Benelux market", "EU", 52.40, 4.90, "M"),
    ("IT_MILAN", "Italy market", "EU", 45.50, 9.20, "M"),
    ("NO_OSLO", "Nordic market", "EU", 59.90, 10.80, "M"),
    ("US_LOSANGELES", "US west market", "NA", 34.10, -118.20, "M"),
    ("US_NEWYORK", "US east market", "NA", 40.70, -74.00, "M"),
    ("US_CHICAGO", "US central market", "NA", 41.90, -87.60, "M"),
    ("CA_TORONTO", "Canada market", "NA", 43.70, -79.40, "M"),
    ("BR_SAOPAULO", "Brazil market", "SA", -23.50, -46.60, "M"),
    ("CL_SANTIAGO", "Chile market", "SA", -33.40, -70.60, "M"),
]

MINERALS = [
    ("aluminum", "Aluminum (bauxite)"),
    ("cobalt", "Cobalt"),
    ("copper", "Copper"),
    ("graphite", "Graphite"),
    ("iron", "Iron"),
    ("lithium", "Lithium"),
    ("manganese", "Manganese"),
    ("nickel", "Nickel"),
    ("phosphate", "Phosphate"),
]

# kg per kWh: extracted, processed
CHEMISTRIES = {
    "NMC": {
        "mineral_mass": {"lithium": 6.0, "nickel": 3.6, "cobalt": 1.3, "manganese": 1.1, "graphite": 1.2,
                         "copper": 0.9, "aluminum": 2.8},
        "processed_mass": {"lithium": 0.7, "nickel": 0.75, "cobalt": 0.22, "manganese": 0.2, "graphite": 1.0,
                           "copper": 0.85, "aluminum": 0.6},
        "battery_mass_per_kwh": 6.9,
        "vehicle_mass_per_kwh": 26.0,
    },
    "LFP": {
        "mineral_mass": {"lithium": 5.2, "iron": 2.4, "phosphate": 3.1, "graphite": 1.3, "copper": 1.0,
                         "aluminum": 3.1},
        "processed_mass": {"lithium": 0.58, "iron": 0.9, "phosphate": 0.95, "graphite": 1.1, "copper": 0.92,
                           "aluminum": 0.68},
        "battery_mass_per_kwh": 7.5,
        "vehicle_mass_per_kwh": 28.0,
    },
    "HighNickel": {
        "mineral_mass": {"lithium": 6.0, "nickel": 5.1, "cobalt": 0.5, "manganese": 0.3, "graphite": 1.1,
                         "copper": 0.9, "aluminum": 2.6},
        "processed_mass": {"lithium": 0.69, "nickel": 0.92, "cobalt": 0.09, "manganese": 0.06, "graphite": 0.95,
                           "copper": 0.84, "aluminum": 0.55},
        "battery_mass_per_kwh": 6.4,
        "vehicle_mass_per_kwh": 25.0,
    },
}

FACTORS = {"gamma1": 0.0048, "gamma2": 0.0161, "gamma3": 0.038, "beta1": 0.105, "beta2": 0.09}

EXTRACTION = {
    "lithium": [("AU_GREENBUSHES", 0.46), ("CL_ATACAMA", 0.25), ("AR_HOMBRE", 0.07), ("CN_QINGHAI", 0.14),
                ("US_THACKER", 0.03), ("PT_BARROSO", 0.05)],
    "nickel": [("ID_SULAWESI", 0.42), ("ID_HALMAHERA", 0.12), ("AU_KAMBALDA", 0.10), ("CA_SUDBURY", 0.08),
               ("RU_NORILSK", 0.18), ("FI_KEMI", 0.10)],
    "cobalt": [("CD_KATANGA", 0.72), ("ID_HALMAHERA", 0.10), ("AU_KAMBALDA", 0.06), ("RU_NORILSK", 0.07),
               ("CA_SUDBURY", 0.05)],
    "manganese": [("ZA_KALAHARI", 0.45), ("GA_MOANDA", 0.22), ("AU_GROOTE", 0.23), ("CN_GUANGXI", 0.10)],
    "graphite": [("CN_HEILONGJIANG", 0.68), ("MZ_BALAMA", 0.14), ("BR_MINAS", 0.10), ("CA_SUDBURY", 0.08)],
    "iron": [("AU_PILBARA", 0.55), ("BR_CARAJAS", 0.30), ("ZA_KALAHARI", 0.15)],
    "phosphate": [("MA_KHOURIBGA", 0.48), ("CN_YUNNAN", 0.42), ("US_THACKER", 0.10)],
    "copper": [("CL_ESCONDIDA", 0.40), ("PE_ANTAMINA", 0.22), ("CD_KATANGA", 0.20), ("CN_YUNNAN", 0.18)],
    "aluminum": [("AU_WEIPA", 0.35), ("GN_BOKE", 0.35), ("CN_GUANGXI", 0.20), ("BR_CARAJAS", 0.10)],
}

PROCESSING = {
    "lithium": [("CN_JIANGXI", 0.38), ("CN_SICHUAN", 0.24), ("CL_ANTOFAGASTA", 0.17), ("AU_KWINANA", 0.09),
                ("US_RENO", 0.05), ("DE_GUBEN", 0.07)],
    "nickel": [("ID_MOROWALI", 0.45), ("CN_GUANGDONG", 0.25), ("FI_KOKKOLA", 0.12), ("JP_NIIHAMA", 0.10),
               ("AU_KWINANA", 0.08)],
    "cobalt": [("CN_GUANGDONG", 0.70), ("FI_KOKKOLA", 0.15), ("JP_NIIHAMA", 0.08), ("KR_GWANGYANG", 0.07)],
    "manganese": [("CN_GUANGDONG", 0.80), ("JP_NIIHAMA", 0.10), ("KR_GWANGYANG", 0.10)],
    "graphite": [("CN_SHANDONG", 0.85), ("KR_GWANGYANG", 0.08), ("US_RENO", 0.07)],
    "iron": [("CN_SHANDONG", 0.75), ("CN_SICHUAN", 0.25)],
    "phosphate": [("CN_SICHUAN", 0.80), ("CN_JIANGXI", 0.20)],
    "copper": [("CN_SHANDONG", 0.45), ("CL_ANTOFAGASTA", 0.30), ("JP_NIIHAMA", 0.15), ("DE_GUBEN", 0.10)],
    "aluminum": [("CN_SHANDONG", 0.65), ("AU_KWINANA", 0.15), ("KR_GWANGYANG", 0.10), ("US_RENO", 0.10)],
}

BATTERY = [("CN_NINGDE", 0.30), ("CN_CHANGZHOU", 0.12), ("CN_SHENZHEN", 0.10), ("KR_OCHANG", 0.14),
           ("JP_OSAKA", 0.08), ("US_SPARKS", 0.06), ("US_TENNESSEE", 0.04), ("PL_WROCLAW", 0.08),
           ("DE_ERFURT", 0.05), ("HU_DEBRECEN", 0.03)]
BATTERY_LFP = [("CN_NINGDE", 0.40), ("CN_SHENZHEN", 0.30), ("CN_CHANGZHOU", 0.20), ("HU_DEBRECEN", 0.05),
               ("US_TENNESSEE", 0.05)]

# battery plant -> vehicle plants
VEHICLE = {
    "CN_NINGDE": [("CN_SHANGHAI", 0.45), ("CN_GUANGZHOU", 0.20), ("CN_XIAN", 0.10), ("DE_GRUENHEIDE", 0.10),
                  ("DE_WOLFSBURG", 0.07), ("IN_PUNE", 0.08)],
    "CN_CHANGZHOU": [("CN_SHANGHAI", 0.55), ("CN_XIAN", 0.25), ("CZ_MLADA", 0.10), ("KR_ULSAN", 0.10)],
    "CN_SHENZHEN": [("CN_GUANGZHOU", 0.55), ("CN_XIAN", 0.25), ("BR_CAMACARI", 0.20)],
    "KR_OCHANG": [("KR_ULSAN", 0.40), ("US_DETROIT", 0.25), ("DE_WOLFSBURG", 0.15), ("US_FREMONT", 0.10),
                  ("FR_DOUAI", 0.10)],
    "JP_OSAKA": [("JP_TOYOTA", 0.60), ("US_FREMONT", 0.25), ("US_AUSTIN", 0.15)],
    "US_SPARKS": [("US_FREMONT", 0.55), ("US_AUSTIN", 0.45)],
    "US_TENNESSEE": [("US_DETROIT", 0.55), ("MX_MONTERREY", 0.30), ("US_AUSTIN", 0.15)],
    "PL_WROCLAW": [("DE_WOLFSBURG", 0.40), ("CZ_MLADA", 0.30), ("FR_DOUAI", 0.30)],
    "DE_ERFURT": [("DE_WOLFSBURG", 0.50), ("DE_GRUENHEIDE", 0.30), ("FR_DOUAI", 0.20)],
    "HU_DEBRECEN": [("CZ_MLADA", 0.45), ("DE_WOLFSBURG", 0.35), ("FR_DOUAI", 0.20)],
}

ASIA = ["CN_BEIJING", "CN_CHENGDU", "CN_HANGZHOU", "JP_TOKYO", "KR_SEOUL", "IN_DELHI", "AU_SYDNEY"]
EUROPE = ["DE_MUNICH", "FR_PARIS", "NL_AMSTERDAM", "IT_MILAN", "NO_OSLO"]
AMERICAS = ["US_LOSANGELES", "US_NEWYORK", "US_CHICAGO", "CA_TORONTO", "BR_SAOPAULO", "CL_SANTIAGO"]

# vehicle plant -> markets
MARKET = {
    "CN_SHANGHAI": [("CN_HANGZHOU", 0.30), ("CN_BEIJING", 0.22), ("CN_CHENGDU", 0.10), ("KR_SEOUL", 0.04),
                    ("AU_SYDNEY", 0.06), ("DE_MUNICH", 0.10), ("NO_OSLO", 0.06), ("US_LOSANGELES", 0.12)],
    "CN_XIAN": [("CN_CHENGDU", 0.35), ("CN_BEIJING", 0.35), ("IN_DELHI", 0.10), ("FR_PARIS", 0.10),
                ("BR_SAOPAULO", 0.10)],
    "CN_GUANGZHOU": [("CN_HANGZHOU", 0.30), ("CN_CHENGDU", 0.20), ("CN_BEIJING", 0.15), ("AU_SYDNEY", 0.10),
                     ("NL_AMSTERDAM", 0.10), ("CL_SANTIAGO", 0.05), ("IN_DELHI", 0.10)],
    "JP_TOYOTA": [("JP_TOKYO", 0.55), ("US_LOSANGELES", 0.20), ("AU_SYDNEY", 0.10), ("DE_MUNICH", 0.15)],
    "KR_ULSAN": [("KR_SEOUL", 0.50), ("US_NEWYORK", 0.15), ("DE_MUNICH", 0.15), ("IN_DELHI", 0.10),
                 ("AU_SYDNEY", 0.10)],
    "IN_PUNE": [("IN_DELHI", 0.85), ("NL_AMSTERDAM", 0.15)],
    "DE_WOLFSBURG": [("DE_MUNICH", 0.35), ("FR_PARIS", 0.15), ("NL_AMSTERDAM", 0.10), ("IT_MILAN", 0.10),
                     ("NO_OSLO", 0.10), ("US_NEWYORK", 0.10), ("CN_BEIJING", 0.10)],
    "DE_GRUENHEIDE": [("DE_MUNICH", 0.40), ("NL_AMSTERDAM", 0.20), ("NO_OSLO", 0.20), ("IT_MILAN", 0.20)],
    "FR_DOUAI": [("FR_PARIS", 0.55), ("NL_AMSTERDAM", 0.15), ("IT_MILAN", 0.15), ("DE_MUNICH", 0.15)],
    "CZ_MLADA": [("DE_MUNICH", 0.40), ("IT_MILAN", 0.30), ("FR_PARIS", 0.20), ("NO_OSLO", 0.10)],
    "US_FREMONT": [("US_LOSANGELES", 0.50), ("US_CHICAGO", 0.15), ("CA_TORONTO", 0.10), ("US_NEWYORK", 0.10),
                   ("JP_TOKYO", 0.05), ("KR_SEOUL", 0.05), ("AU_SYDNEY", 0.05)],
    "US_AUSTIN": [("US_LOSANGELES", 0.25), ("US_CHICAGO", 0.30), ("US_NEWYORK", 0.30), ("CA_TORONTO", 0.15)],
    "US_DETROIT": [("US_CHICAGO", 0.35), ("US_NEWYORK", 0.35), ("CA_TORONTO", 0.30)],
    "MX_MONTERREY": [("US_LOSANGELES", 0.30), ("US_CHICAGO", 0.20), ("BR_SAOPAULO", 0.25), ("CL_SANTIAGO", 0.25)],
    "BR_CAMACARI": [("BR_SAOPAULO", 0.75), ("CL_SANTIAGO", 0.25)],
}

# Future structure: more regional processing and cell production.
FUTURE_PROCESSING = {
    "lithium": [("CN_JIANGXI", 0.25), ("CN_SICHUAN", 0.15), ("CL_ANTOFAGASTA", 0.20), ("AU_KWINANA", 0.15),
                ("US_RENO", 0.12), ("DE_GUBEN", 0.13)],
    "nickel": [("ID_MOROWALI", 0.40), ("CN_GUANGDONG", 0.15), ("FI_KOKKOLA", 0.20), ("JP_NIIHAMA", 0.10),
               ("AU_KWINANA", 0.15)],
    "graphite": [("CN_SHANDONG", 0.65), ("KR_GWANGYANG", 0.15), ("US_RENO", 0.20)],
    "aluminum": [("CN_SHANDONG", 0.45), ("AU_KWINANA", 0.25), ("KR_GWANGYANG", 0.10), ("US_RENO", 0.20)],
}
FUTURE_BATTERY = [("CN_NINGDE", 0.22), ("CN_CHANGZHOU", 0.10), ("CN_SHENZHEN", 0.08), ("KR_OCHANG", 0.12),
                  ("JP_OSAKA", 0.08), ("US_SPARKS", 0.10), ("US_TENNESSEE", 0.10), ("PL_WROCLAW", 0.08),
                  ("DE_ERFURT", 0.07), ("HU_DEBRECEN", 0.05)]
FUTURE_BATTERY_LFP = [("CN_NINGDE", 0.30), ("CN_SHENZHEN", 0.22), ("CN_CHANGZHOU", 0.16), ("HU_DEBRECEN", 0.16),
                      ("US_TENNESSEE", 0.16)]
FUTURE_VEHICLE = {
    "CN_NINGDE": [("CN_SHANGHAI", 0.55), ("CN_GUANGZHOU", 0.25), ("CN_XIAN", 0.12), ("IN_PUNE", 0.08)],
    "KR_OCHANG": [("KR_ULSAN", 0.60), ("US_DETROIT", 0.25), ("DE_WOLFSBURG", 0.15)],
}

SALES = {
    # market: {chemistry: GWh}
    "CN_BEIJING": {"NMC": 60.0, "LFP": 110.0, "HighNickel": 15.0},
    "CN_CHENGDU": {"NMC": 25.0, "LFP": 70.0, "HighNickel": 5.0},
    "CN_HANGZHOU": {"NMC": 55.0, "LFP": 120.0, "HighNickel": 12.0},
    "JP_TOKYO": {"NMC": 8.0, "LFP": 2.0, "HighNickel": 4.0},
    "KR_SEOUL": {"NMC": 9.0, "LFP": 2.0, "HighNickel": 6.0},
    "IN_DELHI": {"NMC": 4.0, "LFP": 6.0, "HighNickel": 0.5},
    "AU_SYDNEY": {"NMC": 5.0, "LFP": 4.0, "HighNickel": 1.0},
    "DE_MUNICH": {"NMC": 30.0, "LFP": 12.0, "HighNickel": 14.0},
    "FR_PARIS": {"NMC": 20.0, "LFP": 9.0, "HighNickel": 6.0},
    "NL_AMSTERDAM": {"NMC": 9.0, "LFP": 4.0, "HighNickel": 3.0},
    "IT_MILAN": {"NMC": 6.0, "LFP": 4.0, "HighNickel": 1.5},
    "NO_OSLO": {"NMC": 9.0, "LFP": 3.0, "HighNickel": 4.0},
    "US_LOSANGELES": {"NMC": 30.0, "LFP": 14.0, "HighNickel": 18.0},
    "US_NEWYORK": {"NMC": 18.0, "LFP": 6.0, "HighNickel": 9.0},
    "US_CHICAGO": {"NMC": 12.0, "LFP": 5.0, "HighNickel": 6.0},
    "CA_TORONTO": {"NMC": 6.0, "LFP": 2.0, "HighNickel": 3.0},
    "BR_SAOPAULO": {"NMC": 3.0, "LFP": 4.0, "HighNickel": 0.5},
    "CL_SANTIAGO": {"NMC": 1.0, "LFP": 1.5, "HighNickel": 0.2},
}

MANUFACTURERS = [
    {"id": "Voltaria Cells", "kind": "BatteryMaker", "nodes": ["CN_NINGDE", "DE_ERFURT", "HU_DEBRECEN"]},
    {"id": "Kestrel Energy", "kind": "BatteryMaker", "nodes": ["KR_OCHANG", "PL_WROCLAW", "US_TENNESSEE"]},
    {"id": "Hoshi Power", "kind": "BatteryMaker", "nodes": ["JP_OSAKA", "US_SPARKS"]},
    {"id": "Lumen Battery", "kind": "BatteryMaker", "nodes": ["CN_SHENZHEN", "CN_CHANGZHOU"]},
    {"id": "Arcwave Motors", "kind": "CarMaker", "nodes": ["CN_SHANGHAI", "DE_GRUENHEIDE", "US_FREMONT", "US_AUSTIN"]},
    {"id": "Nordwerk Auto", "kind": "CarMaker", "nodes": ["DE_WOLFSBURG", "CZ_MLADA"]},
    {"id": "Sakura Mobility", "kind": "CarMaker", "nodes": ["JP_TOYOTA"]},
    {"id": "Hanul Motors", "kind": "CarMaker", "nodes": ["KR_ULSAN"]},
    {"id": "Meridien Auto", "kind": "CarMaker", "nodes": ["FR_DOUAI"]},
    {"id": "Dragonline EV", "kind": "CarMaker", "nodes": ["CN_XIAN", "CN_GUANGZHOU", "BR_CAMACARI"]},
    {"id": "Ganga Motors", "kind": "CarMaker", "nodes": ["IN_PUNE"]},
    {"id": "Lakeshore Vehicles", "kind": "CarMaker", "nodes": ["US_DETROIT", "MX_MONTERREY"]},
]

# Regions reachable from each other over land.
LANDMASS = {"CN": "asia", "IN": "asia", "EU": "europe", "NA": "america_n", "SA": "america_s", "AU": "au",
            "AF": "africa", "KR": "kr", "JP": "jp", "ID": "id", "OTHER": "asia"}
MAX_LAND_KM = 2500.0
ROAD_DETOUR = 1.3
SEA_DETOUR = 1.25
DRAYAGE_KM = 120.0


def haversine(a, b):
    r = 6371.0
    p1, p2 = math.radians(a[3]), math.radians(b[3])
    dp = p2 - p1
    dl = math.radians(b[4] - a[4])
    h = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * r * math.asin(min(1.0, math.sqrt(h)))


def vessel_for(kind):
    return {"EP": "BulkCarrier", "PB": "BulkCarrier", "BV": "ContainerShip", "VM": "VehicleCarrier"}[kind]


def vehicle_for(kind):
    return "ArticulatedVehicleTransport" if kind == "VM" else "HeavyGoodsDiesel"


def make_link(a, b, kind):
    d = haversine(a, b)
    if a[0] == b[0]:
        return None
    if LANDMASS[a[2]] == LANDMASS[b[2]] and d <= MAX_LAND_KM:
        return (a[0], b[0], round(d * ROAD_DETOUR, 1), 0.0, "", vehicle_for(kind))
    return (a[0], b[0], DRAYAGE_KM, round(d * SEA_DETOUR, 1), vessel_for(kind), vehicle_for(kind))


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r)


def choice_rows(extraction, processing, battery, battery_lfp):
    rows = []
    for mineral in sorted(extraction):
        for node, p in extraction[mineral]:
            rows.append(("E", mineral, node, p))
    for mineral in sorted(processing):
        for node, p in processing[mineral]:
            rows.append(("P", mineral, node, p))
    for node, p in battery:
        rows.append(("B", "battery", node, p))
    for node, p in battery_lfp:
        rows.append(("B", "LFP", node, p))
    return rows


def conditional_rows(vehicle, market):
    rows = []
    for b, opts in vehicle.items():
        for node, p in opts:
            rows.append(("V", b, node, p))
    for v, opts in market.items():
        for node, p in opts:
            rows.append(("M", v, node, p))
    return rows


def main():
    os.makedirs(OUT, exist_ok=True)
    by_id = {n[0]: n for n in NODES}
    for group in (EXTRACTION, PROCESSING, FUTURE_PROCESSING):
        for opts in group.values():
            assert abs(sum(p for _, p in opts) - 1.0) < 1e-9, opts
    for table in (VEHICLE, MARKET, FUTURE_VEHICLE):
        for opts in table.values():
            assert abs(sum(p for _, p in opts) - 1.0) < 1e-9, opts
    for opts in (BATTERY, BATTERY_LFP, FUTURE_BATTERY, FUTURE_BATTERY_LFP):
        assert abs(sum(p for _, p in opts) - 1.0) < 1e-9, opts

    write_csv(os.path.join(OUT, "nodes.csv"), ["id", "name", "region", "lat", "lon", "roles"], NODES)
    write_csv(os.path.join(OUT, "minerals.csv"), ["id", "name"], MINERALS)
    with open(os.path.join(OUT, "chemistries.json"), "w") as f:
        json.dump(CHEMISTRIES, f, indent=2)
        f.write("\n")
    with open(os.path.join(OUT, "factors.json"), "w") as f:
        json.dump(FACTORS, f, indent=2)
        f.write("\n")
    with open(os.path.join(OUT, "manufacturers.json"), "w") as f:
        json.dump(MANUFACTURERS, f, indent=2)
        f.write("\n")

    future_processing = dict(PROCESSING)
    future_processing.update(FUTURE_PROCESSING)
    future_vehicle = dict(VEHICLE)
    future_vehicle.update(FUTURE_VEHICLE)

    header = ["phase", "decision", "node_id", "probability"]
    write_csv(os.path.join(OUT, "choices.csv"), header, choice_rows(EXTRACTION, PROCESSING, BATTERY, BATTERY_LFP))
    write_csv(os.path.join(OUT, "future_choices.csv"), header,
              choice_rows(EXTRACTION, future_processing, FUTURE_BATTERY, FUTURE_BATTERY_LFP))
    cheader = ["phase", "given_node_id", "node_id", "probability"]
    write_csv(os.path.join(OUT, "conditional_choices.csv"), cheader, conditional_rows(VEHICLE, MARKET))
    write_csv(os.path.join(OUT, "future_conditional_choices.csv"), cheader, conditional_rows(future_vehicle, MARKET))

    # Links for every pair the simulator or the hub model can use.
    pairs = {}
    roles = {n[0]: n[5] for n in NODES}
    ids_with = lambda r: [n[0] for n in NODES if r in roles[n[0]]]
    for e in ids_with("E"):
        for p in ids_with("P"):
            pairs[(e, p)] = "EP"
        for v in ids_with("V"):
            pairs[(e, v)] = "EP"
    for p in ids_with("P"):
        for b in ids_with("B"):
            pairs[(p, b)] = "PB"
    for b in ids_with("B"):
        for v in ids_with("V"):
            pairs[(b, v)] = "BV"
    for v in ids_with("V"):
        for m in ids_with("M"):
            pairs[(v, m)] = "VM"
    links = []
    for (o, d), kind in sorted(pairs.items()):
        link = make_link(by_id[o], by_id[d], kind)
        if link:
            links.append(link)
    write_csv(os.path.join(OUT, "links.csv"),
              ["origin", "destination", "land_km", "sea_km", "sea_vessel", "land_vehicle"], links)

    sales = []
    for market, by_chem in SALES.items():
        for chem, gwh in by_chem.items():
            sales.append((market, chem, gwh))
    write_csv(os.path.join(OUT, "sales.csv"), ["market", "chemistry", "gwh"], sales)

    manifest = {
        "nodes": "nodes.csv",
        "minerals": "minerals.csv",
        "chemistries": "chemistries.json",
        "choices": "choices.csv",
        "conditional_choices": "conditional_choices.csv",
        "links": "links.csv",
        "factors": "factors.json",
        "manufacturers": "manufacturers.json",
        "sales": "sales.csv",
        "fallback": "great-circle:1.2",
    }
    with open(os.path.join(OUT, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")

    scenario = {
        "p": 2,
        "future": {"choices": "future_choices.csv", "conditional_choices": "future_conditional_choices.csv"},
        "groups": [
            {"name": "Asia", "markets": ASIA},
            {"name": "EU", "markets": EUROPE},
            {"name": "Americas", "markets": AMERICAS},
        ],
    }
    with open(os.path.join(OUT, "optimization.json"), "w") as f:
        json.dump(scenario, f, indent=2)
        f.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
