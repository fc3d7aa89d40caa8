"""
Theme vocabularies for chartsem.

Curated column names, category values and scopes used by the synthetic table
generator and by the task-oriented insight templates.
"""

THEMES = {
    'sales': {
        'categorical': {
            'region': ['North', 'South', 'East', 'West', 'Central', 'Coastal', 'Mountain',
                       'Lakes', 'Plains', 'Delta', 'Highlands', 'Valley', 'Harbor', 'Metro',
                       'Rural', 'Islands'],
            'product': ['Laptops', 'Phones', 'Tablets', 'Monitors', 'Printers', 'Cameras',
                        'Headphones', 'Speakers', 'Routers', 'Keyboards'],
            'channel': ['Online', 'Retail', 'Wholesale', 'Catalog', 'Partner'],
        },
        'numeric': {'revenue': 5000.0, 'units sold': 400.0, 'profit': 900.0, 'discount rate': 0.2},
        'context': 'retail sales planning',
        'audience': 'sales managers',
    },
    'population': {
        'categorical': {
            'country': ['Norway', 'Chile', 'Kenya', 'Vietnam', 'Canada', 'Peru', 'Ghana',
                        'Poland', 'Japan', 'Egypt', 'Mexico', 'Spain', 'India', 'Brazil',
                        'Turkey', 'Sweden', 'Nigeria', 'Italy'],
            'age group': ['0-14', '15-24', '25-44', '45-64', '65+'],
            'settlement': ['Urban', 'Suburban', 'Rural'],
        },
        'numeric': {'population': 2.0e6, 'birth rate': 14.0, 'median age': 38.0, 'growth rate': 1.2},
        'context': 'demographic planning',
        'audience': 'policy analysts',
    },
    'temperature': {
        'categorical': {
            'city': ['Oslo', 'Cairo', 'Lima', 'Perth', 'Denver', 'Hanoi', 'Quito', 'Dakar',
                     'Seoul', 'Lyon', 'Reno', 'Cusco'],
            'station': ['Airport', 'Downtown', 'Harbor', 'Hilltop', 'Riverside', 'Campus'],
            'season': ['Winter', 'Spring', 'Summer', 'Autumn'],
        },
        'numeric': {'mean temperature': 15.0, 'max temperature': 25.0, 'rainfall': 80.0, 'humidity': 60.0},
        'context': 'climate monitoring',
        'audience': 'meteorologists',
    },
    'bookings': {
        'categorical': {
            'hotel': ['Resort', 'City Hotel', 'Hostel', 'Boutique', 'Motel', 'Lodge', 'Inn'],
            'booking channel': ['Direct', 'Travel Agent', 'Corporate', 'Online Agency', 'Group'],
            'room type': ['Single', 'Double', 'Suite', 'Family', 'Studio'],
        },
        'numeric': {'bookings': 300.0, 'cancellations': 40.0, 'average daily rate': 120.0, 'stay length': 3.5},
        'context': 'hotel revenue management',
        'audience': 'hospitality managers',
    },
    'income': {
        'categorical': {
            'occupation': ['Teacher', 'Nurse', 'Engineer', 'Farmer', 'Driver', 'Chef', 'Clerk',
                           'Designer', 'Lawyer', 'Pilot', 'Baker'],
            'education': ['Primary', 'Secondary', 'Bachelor', 'Master', 'Doctorate'],
            'household type': ['Single', 'Couple', 'Family', 'Shared'],
        },
        'numeric': {'median income': 52000.0, 'hourly wage': 24.0, 'savings': 8000.0, 'tax paid': 9000.0},
        'context': 'household income policy',
        'audience': 'economists',
    },
    'energy': {
        'categorical': {
            'source': ['Solar', 'Wind', 'Hydro', 'Nuclear', 'Gas', 'Coal', 'Biomass', 'Geothermal'],
            'sector': ['Residential', 'Industrial', 'Commercial', 'Transport', 'Agriculture'],
            'grid zone': ['Zone A', 'Zone B', 'Zone C', 'Zone D', 'Zone E', 'Zone F'],
        },
        'numeric': {'generation': 1200.0, 'consumption': 900.0, 'capacity': 2500.0, 'price': 0.14},
        'context': 'energy supply planning',
        'audience': 'grid operators',
    },
    'traffic': {
        'categorical': {
            'road': ['Ring Road', 'Main Street', 'Harbor Bridge', 'North Highway', 'Tunnel',
                     'Airport Link', 'River Drive', 'Market Lane', 'Station Road'],
            'vehicle type': ['Car', 'Bus', 'Truck', 'Bicycle', 'Motorcycle', 'Van'],
            'time of day': ['Morning', 'Midday', 'Evening', 'Night'],
        },
        'numeric': {'vehicle count': 15000.0, 'average speed': 45.0, 'accidents': 12.0, 'delay minutes': 18.0},
        'context': 'urban traffic management',
        'audience': 'transport planners',
    },
    'ratings': {
        'categorical': {
            'app': ['PhotoBox', 'TaskFlow', 'MapMate', 'FitTrack', 'ChefNote', 'CodePad',
                    'BudgetBee', 'SleepWell', 'LinguaGo', 'NewsNest', 'PetPal', 'TuneUp'],
            'genre': ['Games', 'Health', 'Finance', 'Education', 'Travel', 'Music', 'Social'],
            'platform': ['Android', 'iOS', 'Web'],
        },
        'numeric': {'average rating': 4.1, 'reviews': 2500.0, 'downloads': 90000.0, 'complaints': 35.0},
        'context': 'product quality tracking',
        'audience': 'product teams',
    },
    'inventory': {
        'categorical': {
            'warehouse': ['Depot 1', 'Depot 2', 'Depot 3', 'Depot 4', 'Depot 5', 'Depot 6', 'Depot 7'],
            'category': ['Hardware', 'Apparel', 'Grocery', 'Toys', 'Furniture', 'Books',
                         'Garden', 'Beauty', 'Sports', 'Pharmacy', 'Auto', 'Pets', 'Office'],
            'supplier': ['Acme', 'Globex', 'Initech', 'Umbra', 'Vandelay', 'Stark'],
        },
        'numeric': {'stock level': 1500.0, 'reorders': 60.0, 'turnover': 5.0, 'shrinkage': 1.5},
        'context': 'supply chain management',
        'audience': 'operations managers',
    },
    'budget': {
        'categorical': {
            'department': ['Health', 'Education', 'Defense', 'Transport', 'Housing', 'Culture',
                           'Science', 'Justice', 'Welfare', 'Environment'],
            'expense type': ['Salaries', 'Equipment', 'Services', 'Grants', 'Maintenance'],
            'fund': ['General', 'Capital', 'Special', 'Reserve'],
        },
        'numeric': {'spending': 3.0e6, 'allocation': 3.5e6, 'variance': 2.0e5, 'headcount': 250.0},
        'context': 'public budget allocation',
        'audience': 'finance officers',
    },
    'enrollment': {
        'categorical': {
            'school': ['Oak High', 'Pine Academy', 'River College', 'Hill School', 'Lake Institute',
                       'Elm Primary', 'Cedar Tech', 'Maple Prep'],
            'program': ['Science', 'Arts', 'Business', 'Engineering', 'Medicine', 'Law', 'Nursing'],
            'gender': ['Female', 'Male', 'Other'],
        },
        'numeric': {'students': 1200.0, 'graduates': 280.0, 'dropout rate': 6.0, 'tuition': 9000.0},
        'context': 'education administration',
        'audience': 'school administrators',
    },
    'emissions': {
        'categorical': {
            'industry': ['Steel', 'Cement', 'Aviation', 'Shipping', 'Agriculture', 'Chemicals',
                         'Mining', 'Textiles', 'Paper', 'Glass', 'Refining'],
            'gas': ['Carbon dioxide', 'Methane', 'Nitrous oxide', 'Fluorinated gases'],
            'facility size': ['Small', 'Medium', 'Large', 'Very large'],
        },
        'numeric': {'co2 emissions': 5.0e4, 'methane emissions': 800.0, 'energy intensity': 6.0, 'offsets': 3000.0},
        'context': 'environmental compliance',
        'audience': 'sustainability officers',
    },
}

THEME_NAMES = sorted(THEMES)

# Temporal column names and their cell format.
TEMPORAL_COLUMNS = {
    'year': 'year',
    'month': 'month',
    'reporting month': 'month',
    'fiscal year': 'year',
}

# Scopes and organisations make titles distinct across tables.
PLACES = [
    'Alderport', 'Brookfield', 'Cresthaven', 'Dunmore', 'Eastvale', 'Fairbourne', 'Glenrock',
    'Harrowgate', 'Ironwood', 'Juniper Bay', 'Kingsford', 'Lakemont', 'Marlow', 'Northwick',
    'Oakridge', 'Pinecrest', 'Queensbury', 'Ravenhill', 'Silverton', 'Thornbury', 'Upton',
    'Valemere', 'Westmarch', 'Yarrow', 'Ashdown', 'Bellmont', 'Coldwater', 'Driftwood',
    'Elmstead', 'Foxley', 'Greystone', 'Hollowbrook', 'Ivydale', 'Kestrel Point', 'Linwood',
    'Millbrook', 'Newhaven', 'Otterburn', 'Pembroke', 'Redcliff', 'Stonebridge', 'Tidewater',
    'Underhill', 'Westbury', 'Windermere', 'Amberley', 'Birchwood', 'Claymoor',
]

ORGANISATIONS = [
    'City Council', 'Statistics Office', 'Chamber of Commerce', 'Regional Authority',
    'Planning Board', 'Research Institute', 'Trade Association', 'Audit Office',
    'Development Agency', 'Public Registry', 'Economic Forum', 'Data Bureau',
    'Civic Observatory', 'Policy Lab', 'Industry Panel', 'Monitoring Unit',
    'Analytics Group', 'Survey Team', 'Federal Office', 'Municipal Board',
    'County Office', 'State Agency', 'Open Data Team', 'Census Unit',
]

# Purpose phrasing keyed by chart family, used by insights and fuzzy queries.
CHART_PURPOSES = {
    'line': 'monitoring trends over time',
    'grouped_line': 'monitoring and comparing trends over time',
    'bar': 'ranking and comparing values across categories',
    'grouped_bar': 'comparing values across categories and subgroups',
    'stacked_bar': 'comparing totals and the proportion of each part',
    'pie': 'allocation and proportion decisions',
    'scatter': 'screening relationships between two measures',
}

QUERY_PURPOSES = {
    'line': 'trend analysis or comparison over time',
    'grouped_line': 'trend analysis or comparison over time',
    'bar': 'value comparison or ranking',
    'grouped_bar': 'value comparison or ranking',
    'stacked_bar': 'distribution or proportion comparison',
    'pie': 'distribution or proportion comparison',
    'scatter': 'correlation or pattern analysis',
}
